#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace voxwheat {

enum class ClassLabel { Fhb, Wc };
enum class Split { Unassigned, Train, Test };

std::string_view class_label_name(ClassLabel label);
std::string_view split_name(Split split);

/// One dataset sample. Optional fields let the same schema serve the
/// detection, counting, and severity tasks.
struct SampleRecord {
    std::string path;
    std::optional<ClassLabel> class_label;
    std::optional<int> total_spikelets;
    std::optional<int> infected_spikelets;
    std::optional<double> severity_pct;
    std::optional<int> dpi;  // days post-inoculation
    Split split = Split::Unassigned;
    std::optional<int> fold;  // 1-based, train records only
};

struct DatasetManifest {
    std::vector<SampleRecord> records;
    std::uint64_t seed = 0;
    double test_fraction = 0.0;
    int fold_count = 0;
};

/// Severity percentage: 100 * infected / total.
/// Throws LabelError unless 0 <= infected <= total and total >= 1.
double compute_severity(int infected, int total);

/// Fill severity_pct from spikelet counts wherever both counts are present
/// and severity is not. Throws LabelError on inconsistent stored values.
void fill_severity(DatasetManifest& manifest);

/// Assign train/test splits stratified by class label (or, for numeric
/// labels, by 4 quantile bins). Per stratum floor(count*fraction) samples go
/// to test; the remainder is topped up largest-stratum-first until the global
/// test count reaches round(total*fraction). Sample choice is a seeded
/// shuffle of each stratum, independent of input record order. Strata with
/// fewer than 2 samples go wholly to train with a warning.
/// Throws LabelError when records carry no usable stratum label.
void stratified_split(DatasetManifest& manifest, double test_fraction, std::uint64_t seed,
                      std::vector<std::string>* warnings = nullptr);

/// Partition train records into k folds, balanced overall and per stratum
/// (sizes differ by at most 1). Test records are untouched.
/// Throws FoldError when k < 2 or k exceeds the train-record count.
void assign_folds(DatasetManifest& manifest, int k, std::uint64_t seed);

// Manifest file format: '#' comment lines carrying seed/parameters, a CSV
// header row, then one record per line. Empty fields stay blank; UTF-8 with
// LF line endings. Serialization is byte-stable for a given manifest.
std::string write_manifest(const DatasetManifest& manifest);
DatasetManifest read_manifest(std::string_view text);
void write_manifest_file(const std::string& path, const DatasetManifest& manifest);
DatasetManifest read_manifest_file(const std::string& path);

/// Records lacking every label field (class, counts, severity); these make
/// stratification impossible.
std::vector<std::string> unlabeled_paths(const DatasetManifest& manifest);

// The three published collections carry different label ranges: spike scans
// are FHB/WC classed, head scans count 7..22 spikelets, and the second
// collection counts 13..21 total with 2..15 infected.
enum class DatasetKind { Dataset1Spikes, Dataset1Heads, Dataset2 };

/// Per-record problems against the published label ranges for `kind`;
/// empty when the manifest conforms.
std::vector<std::string> check_label_ranges(const DatasetManifest& manifest, DatasetKind kind);

}  // namespace voxwheat
