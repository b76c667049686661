#ifndef SEGBOUND_IO_HPP
#define SEGBOUND_IO_HPP

#include <map>
#include <string>
#include <vector>

#include "segbound/types.hpp"

namespace segbound {

// Posteriorgram file: UTF-8 CSV, header row = class labels, then one row
// of N decimal floats per frame. Rows whose sum deviates from 1 by at
// most 1e-4 are renormalized; larger deviations are an error.
Posteriorgram load_posteriorgram(const std::string& path,
                                 double frame_shift_ms = 10.0);
void write_posteriorgram(const Posteriorgram& p, const std::string& path);

/// One labelled segment of a transcription, in milliseconds.
struct LabelSegment {
  double start_ms = 0.0;
  double end_ms = 0.0;
  std::string label;
};

// Label file: text lines "start_ms end_ms label", whitespace separated,
// contiguous segments. Tokens past the label are ignored.
std::vector<LabelSegment> load_label_segments(const std::string& path);
void write_label_segments(const std::vector<LabelSegment>& segments,
                          const std::string& path);

/// Reference boundaries are the segment-end times of all but the last
/// segment, converted with b = round(end_ms / frame_shift_ms) - 1 (ties
/// round up). Also derives the frame count from the last segment end.
BoundarySet boundaries_from_segments(const std::vector<LabelSegment>& segments,
                                     double frame_shift_ms);
BoundarySet load_labels(const std::string& path, double frame_shift_ms);

// Boundary file: lines "index time_ms". The time column is presentation
// only; indices are authoritative. Geometry comes from the caller.
BoundarySet load_boundaries(const std::string& path, int num_frames,
                            double frame_shift_ms);
void write_boundaries(const BoundarySet& b, const std::string& path);

// Report file: "key value" lines for C, D, T, precision, recall,
// criterion, tolerance_frames. Undefined ratios are written as the word
// "undefined".
EvalReport load_report(const std::string& path);
void write_report(const EvalReport& r, const std::string& path);

// Stats file: "kind mean stddev" lines, one per measure kind, in decision
// polarity (d2 and ma statistics are those of the negated measure).
using StatsMap = std::map<MeasureKind, GlobalStats>;
StatsMap load_stats(const std::string& path);
void write_stats(const StatsMap& stats, const std::string& path);

/// One utterance of a corpus list: posteriorgram + reference labels.
struct CorpusEntry {
  std::string id;
  std::string posteriorgram_path;
  std::string label_path;
};

/// A corpus list / manifest. "corpus key value" header lines carry
/// whole-corpus facts (boundary counts, rate); "utt id post label" lines
/// name the utterances. Bare "post label" two-column lines are accepted
/// too. Relative paths are resolved against the list file's directory.
struct CorpusList {
  std::vector<CorpusEntry> entries;
  double frame_shift_ms = 10.0;
  long long total_boundaries = -1; // -1 when the list does not say
  long long total_positions = -1;
  double boundary_rate = -1.0;
};

CorpusList load_corpus_list(const std::string& path);
void write_corpus_list(const CorpusList& corpus, const std::string& path);

} // namespace segbound

#endif // SEGBOUND_IO_HPP
