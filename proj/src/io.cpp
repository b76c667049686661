#include "segbound/io.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace segbound {

namespace {

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw Error("cannot open " + path + " for reading");
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out)
    throw Error("cannot open " + path + " for writing");
  return out;
}

void check_write(const std::ofstream& out, const std::string& path) {
  if (!out)
    throw Error("write failed for " + path);
}

double parse_double(const std::string& token, const std::string& context) {
  const char* begin = token.c_str();
  char* end = nullptr;
  errno = 0;
  double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || errno == ERANGE)
    throw Error("bad number '" + token + "' in " + context);
  return v;
}

long long parse_int(const std::string& token, const std::string& context) {
  long long v = 0;
  auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size())
    throw Error("bad integer '" + token + "' in " + context);
  return v;
}

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream iss(line);
  std::string tok;
  while (iss >> tok)
    tokens.push_back(tok);
  return tokens;
}

void split_csv(const std::string& line, std::vector<std::string>& out) {
  out.clear();
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

bool blank_or_comment(const std::string& line) {
  for (char c : line) {
    if (c == '#')
      return true;
    if (!std::isspace(static_cast<unsigned char>(c)))
      return false;
  }
  return true;
}

// Full-precision float for round-trip stable files.
std::string fmt_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Presentation float: shortest %g with a guaranteed decimal point.
std::string fmt_time(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  if (!std::strpbrk(buf, ".einf"))
    std::strcat(buf, ".0");
  return buf;
}

// round() with halfway cases toward +inf, for label time conversion.
long long round_half_up(double x) {
  return static_cast<long long>(std::floor(x + 0.5));
}

} // namespace

Posteriorgram load_posteriorgram(const std::string& path,
                                 double frame_shift_ms) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line))
    throw Error("empty posteriorgram file " + path);

  Posteriorgram p;
  p.frame_shift_ms = frame_shift_ms;
  std::vector<std::string> fields;
  split_csv(line, fields);
  for (auto& f : fields)
    p.class_labels.push_back(f);
  p.num_classes = p.class_labels.size();
  if (p.num_classes < 2)
    throw Error("posteriorgram needs at least 2 classes: " + path);

  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() && in.peek() == std::char_traits<char>::eof())
      break;
    split_csv(line, fields);
    if (fields.size() != p.num_classes)
      throw Error("row width " + std::to_string(fields.size()) + " != " +
                  std::to_string(p.num_classes) + " at " + path + ":" +
                  std::to_string(lineno));
    double sum = 0.0;
    for (const auto& f : fields) {
      double v = parse_double(f, path + ":" + std::to_string(lineno));
      if (v < 0.0)
        throw Error("negative probability at " + path + ":" +
                    std::to_string(lineno));
      p.values.push_back(v);
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-4)
      throw Error("row not on simplex (sum " + fmt_time(sum) + ") at " +
                  path + ":" + std::to_string(lineno));
    double* row = p.values.data() + p.values.size() - p.num_classes;
    for (std::size_t i = 0; i < p.num_classes; ++i)
      row[i] /= sum;
    ++p.num_frames;
  }
  if (p.num_frames == 0)
    throw Error("posteriorgram has no frames: " + path);
  validate(p);
  return p;
}

void write_posteriorgram(const Posteriorgram& p, const std::string& path) {
  validate(p);
  std::ofstream out = open_out(path);
  for (std::size_t i = 0; i < p.num_classes; ++i) {
    if (i)
      out << ',';
    out << (p.class_labels.empty() ? "c" + std::to_string(i)
                                   : p.class_labels[i]);
  }
  out << '\n';
  for (std::size_t t = 0; t < p.num_frames; ++t) {
    auto row = p.row(t);
    for (std::size_t i = 0; i < p.num_classes; ++i) {
      if (i)
        out << ',';
      out << fmt_full(row[i]);
    }
    out << '\n';
  }
  check_write(out, path);
}

std::vector<LabelSegment> load_label_segments(const std::string& path) {
  std::ifstream in = open_in(path);
  std::vector<LabelSegment> segments;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank_or_comment(line))
      continue;
    auto tokens = split_ws(line);
    if (tokens.size() < 3)
      throw Error("expected 'start_ms end_ms label' at " + path + ":" +
                  std::to_string(lineno));
    LabelSegment s;
    const std::string ctx = path + ":" + std::to_string(lineno);
    s.start_ms = parse_double(tokens[0], ctx);
    s.end_ms = parse_double(tokens[1], ctx);
    s.label = tokens[2];
    if (s.start_ms < 0.0 || s.end_ms < 0.0)
      throw Error("negative time at " + ctx);
    if (s.end_ms <= s.start_ms)
      throw Error("segment end <= start at " + ctx);
    if (!segments.empty() && s.start_ms != segments.back().end_ms)
      throw Error("segments not contiguous at " + ctx);
    segments.push_back(std::move(s));
  }
  if (segments.empty())
    throw Error("no segments in " + path);
  return segments;
}

void write_label_segments(const std::vector<LabelSegment>& segments,
                          const std::string& path) {
  std::ofstream out = open_out(path);
  for (const auto& s : segments)
    out << fmt_full(s.start_ms) << ' ' << fmt_full(s.end_ms) << ' ' << s.label
        << '\n';
  check_write(out, path);
}

BoundarySet boundaries_from_segments(const std::vector<LabelSegment>& segments,
                                     double frame_shift_ms) {
  if (segments.empty())
    throw Error("no segments");
  if (frame_shift_ms <= 0.0)
    throw Error("frame shift must be positive");
  long long num_frames =
      round_half_up(segments.back().end_ms / frame_shift_ms);
  if (num_frames < 1)
    num_frames = 1;
  std::vector<int> indices;
  for (std::size_t k = 0; k + 1 < segments.size(); ++k) {
    long long b = round_half_up(segments[k].end_ms / frame_shift_ms) - 1;
    // Sub-frame initial segments round below the first gap; clamp.
    if (b < 0)
      b = 0;
    if (b > num_frames - 2)
      b = num_frames - 2;
    if (num_frames >= 2)
      indices.push_back(static_cast<int>(b));
  }
  return make_boundary_set(std::move(indices), static_cast<int>(num_frames),
                           frame_shift_ms);
}

BoundarySet load_labels(const std::string& path, double frame_shift_ms) {
  return boundaries_from_segments(load_label_segments(path), frame_shift_ms);
}

BoundarySet load_boundaries(const std::string& path, int num_frames,
                            double frame_shift_ms) {
  std::ifstream in = open_in(path);
  std::vector<int> indices;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank_or_comment(line))
      continue;
    auto tokens = split_ws(line);
    if (tokens.empty())
      continue;
    long long idx =
        parse_int(tokens[0], path + ":" + std::to_string(lineno));
    indices.push_back(static_cast<int>(idx));
  }
  return make_boundary_set(std::move(indices), num_frames, frame_shift_ms);
}

void write_boundaries(const BoundarySet& b, const std::string& path) {
  validate(b);
  std::ofstream out = open_out(path);
  for (int idx : b.indices)
    out << idx << ' ' << fmt_time(b.boundary_time_ms(idx)) << '\n';
  check_write(out, path);
}

EvalReport load_report(const std::string& path) {
  std::ifstream in = open_in(path);
  EvalReport r;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank_or_comment(line))
      continue;
    auto tokens = split_ws(line);
    if (tokens.size() != 2)
      throw Error("expected 'key value' at " + path + ":" +
                  std::to_string(lineno));
    const std::string& key = tokens[0];
    const std::string& val = tokens[1];
    const std::string ctx = path + ":" + std::to_string(lineno);
    auto ratio = [&](double& field, bool& defined) {
      if (val == "undefined") {
        defined = false;
        field = std::numeric_limits<double>::quiet_NaN();
      } else {
        defined = true;
        field = parse_double(val, ctx);
      }
    };
    if (key == "C")
      r.correct = parse_int(val, ctx);
    else if (key == "D")
      r.detected = parse_int(val, ctx);
    else if (key == "T")
      r.reference = parse_int(val, ctx);
    else if (key == "precision")
      ratio(r.precision, r.precision_defined);
    else if (key == "recall")
      ratio(r.recall, r.recall_defined);
    else if (key == "criterion")
      ratio(r.criterion, r.criterion_defined);
    else if (key == "tolerance_frames")
      r.tolerance_frames = static_cast<int>(parse_int(val, ctx));
    else
      throw Error("unknown report key '" + key + "' at " + ctx);
  }
  return r;
}

void write_report(const EvalReport& r, const std::string& path) {
  std::ofstream out = open_out(path);
  auto ratio = [](double v, bool defined) {
    return defined ? fmt_full(v) : std::string("undefined");
  };
  out << "C " << r.correct << '\n';
  out << "D " << r.detected << '\n';
  out << "T " << r.reference << '\n';
  out << "precision " << ratio(r.precision, r.precision_defined) << '\n';
  out << "recall " << ratio(r.recall, r.recall_defined) << '\n';
  out << "criterion " << ratio(r.criterion, r.criterion_defined) << '\n';
  out << "tolerance_frames " << r.tolerance_frames << '\n';
  check_write(out, path);
}

StatsMap load_stats(const std::string& path) {
  std::ifstream in = open_in(path);
  StatsMap stats;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank_or_comment(line))
      continue;
    auto tokens = split_ws(line);
    if (tokens.size() != 3)
      throw Error("expected 'kind mean stddev' at " + path + ":" +
                  std::to_string(lineno));
    const std::string ctx = path + ":" + std::to_string(lineno);
    MeasureKind kind = measure_kind_from_string(tokens[0]);
    GlobalStats g;
    g.mean = parse_double(tokens[1], ctx);
    g.stddev = parse_double(tokens[2], ctx);
    if (g.stddev < 0.0)
      throw Error("negative stddev at " + ctx);
    stats[kind] = g;
  }
  if (stats.empty())
    throw Error("no statistics in " + path);
  return stats;
}

void write_stats(const StatsMap& stats, const std::string& path) {
  std::ofstream out = open_out(path);
  for (const auto& [kind, g] : stats)
    out << to_string(kind) << ' ' << fmt_full(g.mean) << ' '
        << fmt_full(g.stddev) << '\n';
  check_write(out, path);
}

CorpusList load_corpus_list(const std::string& path) {
  std::ifstream in = open_in(path);
  CorpusList corpus;
  std::filesystem::path dir = std::filesystem::path(path).parent_path();
  auto resolve = [&](const std::string& p) {
    std::filesystem::path fp(p);
    return fp.is_absolute() ? fp.string() : (dir / fp).string();
  };
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank_or_comment(line))
      continue;
    auto tokens = split_ws(line);
    const std::string ctx = path + ":" + std::to_string(lineno);
    if (tokens[0] == "corpus") {
      if (tokens.size() != 3)
        throw Error("expected 'corpus key value' at " + ctx);
      if (tokens[1] == "frame_shift_ms")
        corpus.frame_shift_ms = parse_double(tokens[2], ctx);
      else if (tokens[1] == "boundaries")
        corpus.total_boundaries = parse_int(tokens[2], ctx);
      else if (tokens[1] == "positions")
        corpus.total_positions = parse_int(tokens[2], ctx);
      else if (tokens[1] == "boundary_rate")
        corpus.boundary_rate = parse_double(tokens[2], ctx);
      else
        throw Error("unknown corpus key '" + tokens[1] + "' at " + ctx);
    } else if (tokens[0] == "utt") {
      if (tokens.size() != 4)
        throw Error("expected 'utt id post label' at " + ctx);
      corpus.entries.push_back(
          {tokens[1], resolve(tokens[2]), resolve(tokens[3])});
    } else if (tokens.size() == 2) {
      std::string id = std::filesystem::path(tokens[0]).stem().string();
      if (auto dot = id.find('.'); dot != std::string::npos)
        id = id.substr(0, dot);
      corpus.entries.push_back({id, resolve(tokens[0]), resolve(tokens[1])});
    } else {
      throw Error("unrecognized corpus list line at " + ctx);
    }
  }
  return corpus;
}

void write_corpus_list(const CorpusList& corpus, const std::string& path) {
  std::ofstream out = open_out(path);
  std::filesystem::path dir = std::filesystem::path(path).parent_path();
  auto relativize = [&](const std::string& p) {
    std::filesystem::path fp(p);
    if (!dir.empty() && fp.is_absolute()) {
      std::error_code ec;
      auto rel = std::filesystem::relative(fp, dir, ec);
      if (!ec && !rel.empty())
        return rel.string();
    }
    return fp.string();
  };
  out << "corpus frame_shift_ms " << fmt_full(corpus.frame_shift_ms) << '\n';
  if (corpus.total_boundaries >= 0)
    out << "corpus boundaries " << corpus.total_boundaries << '\n';
  if (corpus.total_positions >= 0)
    out << "corpus positions " << corpus.total_positions << '\n';
  if (corpus.boundary_rate >= 0.0)
    out << "corpus boundary_rate " << fmt_full(corpus.boundary_rate) << '\n';
  for (const auto& e : corpus.entries)
    out << "utt " << e.id << ' ' << relativize(e.posteriorgram_path) << ' '
        << relativize(e.label_path) << '\n';
  check_write(out, path);
}

} // namespace segbound
