#include "voxwheat/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "voxwheat/errors.hpp"
#include "voxwheat/rng.hpp"

namespace voxwheat {

std::string_view class_label_name(ClassLabel label) {
    return label == ClassLabel::Fhb ? "FHB" : "WC";
}

std::string_view split_name(Split split) {
    switch (split) {
        case Split::Train: return "train";
        case Split::Test: return "test";
        case Split::Unassigned: return "";
    }
    return "";
}

double compute_severity(int infected, int total) {
    if (total < 1) throw LabelError("total spikelet count must be at least 1");
    if (infected < 0) throw LabelError("infected spikelet count cannot be negative");
    if (infected > total) throw LabelError("infected spikelets exceed total spikelets");
    return 100.0 * double(infected) / double(total);
}

void fill_severity(DatasetManifest& manifest) {
    for (auto& rec : manifest.records) {
        if (!rec.total_spikelets || !rec.infected_spikelets) continue;
        const double severity = compute_severity(*rec.infected_spikelets, *rec.total_spikelets);
        if (rec.severity_pct) {
            if (std::abs(*rec.severity_pct - severity) > 1e-9)
                throw LabelError("stored severity disagrees with spikelet counts for " + rec.path);
        } else {
            rec.severity_pct = severity;
        }
    }
}

std::vector<std::string> unlabeled_paths(const DatasetManifest& manifest) {
    std::vector<std::string> missing;
    for (const auto& rec : manifest.records) {
        if (!rec.class_label && !rec.severity_pct && !rec.infected_spikelets &&
            !rec.total_spikelets)
            missing.push_back(rec.path);
    }
    return missing;
}

std::vector<std::string> check_label_ranges(const DatasetManifest& manifest, DatasetKind kind) {
    std::vector<std::string> problems;
    auto flag = [&](const SampleRecord& rec, const std::string& what) {
        problems.push_back(rec.path + ": " + what);
    };
    for (const auto& rec : manifest.records) {
        switch (kind) {
            case DatasetKind::Dataset1Spikes:
                if (!rec.class_label) flag(rec, "missing FHB/WC class label");
                break;
            case DatasetKind::Dataset1Heads:
                if (!rec.total_spikelets) flag(rec, "missing total spikelet count");
                else if (*rec.total_spikelets < 7 || *rec.total_spikelets > 22)
                    flag(rec, "total spikelets " + std::to_string(*rec.total_spikelets) +
                                  " outside [7,22]");
                break;
            case DatasetKind::Dataset2:
                if (!rec.total_spikelets || !rec.infected_spikelets) {
                    flag(rec, "missing spikelet counts");
                    break;
                }
                if (*rec.total_spikelets < 13 || *rec.total_spikelets > 21)
                    flag(rec, "total spikelets " + std::to_string(*rec.total_spikelets) +
                                  " outside [13,21]");
                if (*rec.infected_spikelets < 2 || *rec.infected_spikelets > 15)
                    flag(rec, "infected spikelets " + std::to_string(*rec.infected_spikelets) +
                                  " outside [2,15]");
                if (*rec.infected_spikelets > *rec.total_spikelets)
                    flag(rec, "infected exceeds total");
                break;
        }
    }
    return problems;
}

namespace {

// Stratum keys: the class label when every record carries one, otherwise the
// first numeric label field present across the manifest, cut into 4 quantile
// bins. Keys are strings so class and binned strata share one code path.
std::vector<std::string> stratum_keys(const DatasetManifest& manifest) {
    const auto& records = manifest.records;

    const bool all_class = std::all_of(records.begin(), records.end(),
                                       [](const SampleRecord& r) { return r.class_label.has_value(); });
    if (all_class) {
        std::vector<std::string> keys(records.size());
        for (std::size_t i = 0; i < records.size(); ++i)
            keys[i] = class_label_name(*records[i].class_label);
        return keys;
    }

    auto numeric_of = [](const SampleRecord& r) -> std::optional<double> {
        if (r.severity_pct) return *r.severity_pct;
        if (r.infected_spikelets) return double(*r.infected_spikelets);
        if (r.total_spikelets) return double(*r.total_spikelets);
        return std::nullopt;
    };

    std::vector<double> values(records.size());
    std::vector<std::string> missing;
    for (std::size_t i = 0; i < records.size(); ++i) {
        auto v = numeric_of(records[i]);
        if (!v) missing.push_back(records[i].path);
        else values[i] = *v;
    }
    if (!missing.empty()) {
        std::string msg = "records lack stratum labels:";
        for (const auto& p : missing) msg += " " + p;
        throw LabelError(msg);
    }

    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::string> keys(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        const std::size_t rank =
            std::size_t(std::lower_bound(sorted.begin(), sorted.end(), values[i]) - sorted.begin());
        const std::size_t bin = rank * 4 / sorted.size();
        keys[i] = "bin" + std::to_string(bin);
    }
    return keys;
}

struct Stratum {
    std::string key;
    std::vector<std::size_t> members;  // record indices, ordered by path
};

std::vector<Stratum> group_strata(const DatasetManifest& manifest,
                                  const std::vector<std::string>& keys) {
    // Order members by path so assignments do not depend on input order.
    std::vector<std::size_t> order(manifest.records.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return manifest.records[a].path < manifest.records[b].path;
    });

    std::map<std::string, Stratum> grouped;
    for (std::size_t idx : order) {
        auto& stratum = grouped[keys[idx]];
        stratum.key = keys[idx];
        stratum.members.push_back(idx);
    }
    std::vector<Stratum> strata;
    strata.reserve(grouped.size());
    for (auto& [key, stratum] : grouped) strata.push_back(std::move(stratum));
    return strata;
}

std::mt19937_64 stratum_rng(std::uint64_t seed, std::string_view tag, std::string_view key) {
    return std::mt19937_64(seed ^ fnv1a(std::string(tag) + "/" + std::string(key)));
}

}  // namespace

void stratified_split(DatasetManifest& manifest, double test_fraction, std::uint64_t seed,
                      std::vector<std::string>* warnings) {
    if (!(test_fraction > 0.0) || !(test_fraction < 1.0))
        throw LabelError("test fraction must lie strictly between 0 and 1");
    if (manifest.records.empty()) throw LabelError("manifest has no records");

    auto keys = stratum_keys(manifest);
    auto strata = group_strata(manifest, keys);

    const std::size_t total = manifest.records.size();
    const std::size_t target = std::size_t(std::floor(double(total) * test_fraction + 0.5));

    // Base allocation: floor(count * fraction) per stratum; tiny strata are
    // kept entirely in train.
    std::vector<std::size_t> take(strata.size(), 0);
    std::size_t allocated = 0;
    for (std::size_t s = 0; s < strata.size(); ++s) {
        if (strata[s].members.size() < 2) {
            if (warnings)
                warnings->push_back("stratum " + strata[s].key + " has fewer than 2 samples; all to train");
            continue;
        }
        take[s] = std::size_t(std::floor(double(strata[s].members.size()) * test_fraction));
        allocated += take[s];
    }

    // Top up largest strata first until the global test count is met. One
    // pass suffices unless tiny strata shrank the eligible pool.
    if (allocated < target) {
        std::vector<std::size_t> by_size(strata.size());
        for (std::size_t s = 0; s < by_size.size(); ++s) by_size[s] = s;
        std::sort(by_size.begin(), by_size.end(), [&](std::size_t a, std::size_t b) {
            if (strata[a].members.size() != strata[b].members.size())
                return strata[a].members.size() > strata[b].members.size();
            return strata[a].key < strata[b].key;
        });
        bool progress = true;
        while (allocated < target && progress) {
            progress = false;
            for (std::size_t s : by_size) {
                if (allocated == target) break;
                if (strata[s].members.size() < 2) continue;
                if (take[s] < strata[s].members.size()) {
                    ++take[s];
                    ++allocated;
                    progress = true;
                }
            }
        }
    }

    for (auto& rec : manifest.records) {
        rec.split = Split::Train;
        rec.fold.reset();
    }
    for (std::size_t s = 0; s < strata.size(); ++s) {
        auto members = strata[s].members;
        auto gen = stratum_rng(seed, "split", strata[s].key);
        seeded_shuffle(members, gen);
        for (std::size_t i = 0; i < take[s]; ++i)
            manifest.records[members[i]].split = Split::Test;
    }

    manifest.seed = seed;
    manifest.test_fraction = test_fraction;
}

void assign_folds(DatasetManifest& manifest, int k, std::uint64_t seed) {
    if (k < 2) throw FoldError("fold count must be at least 2");

    std::size_t train_count = 0;
    for (const auto& rec : manifest.records)
        if (rec.split == Split::Train) ++train_count;
    if (std::size_t(k) > train_count)
        throw FoldError("fold count exceeds the number of train records");

    auto keys = stratum_keys(manifest);
    auto strata = group_strata(manifest, keys);

    // Per stratum: hand out base = n/k to every fold, then give the
    // remainder one-by-one to the currently smallest folds. Fold totals can
    // never spread more than 1 apart.
    std::vector<std::size_t> fold_totals(std::size_t(k), 0);

    // Biggest strata first so their remainders are balanced by later ones.
    std::sort(strata.begin(), strata.end(), [](const Stratum& a, const Stratum& b) {
        if (a.members.size() != b.members.size()) return a.members.size() > b.members.size();
        return a.key < b.key;
    });

    for (const auto& stratum : strata) {
        std::vector<std::size_t> members;
        for (std::size_t idx : stratum.members)
            if (manifest.records[idx].split == Split::Train) members.push_back(idx);
        if (members.empty()) continue;

        auto gen = stratum_rng(seed, "folds", stratum.key);
        seeded_shuffle(members, gen);

        const std::size_t base = members.size() / std::size_t(k);
        const std::size_t rem = members.size() % std::size_t(k);

        std::vector<std::size_t> quota(std::size_t(k), base);
        if (rem > 0) {
            std::vector<std::size_t> fold_order;
            fold_order.resize(std::size_t(k));
            for (std::size_t f = 0; f < fold_order.size(); ++f) fold_order[f] = f;
            std::stable_sort(fold_order.begin(), fold_order.end(), [&](std::size_t a, std::size_t b) {
                return fold_totals[a] < fold_totals[b];
            });
            for (std::size_t i = 0; i < rem; ++i) ++quota[fold_order[i]];
        }

        std::size_t cursor = 0;
        for (std::size_t f = 0; f < std::size_t(k); ++f) {
            for (std::size_t i = 0; i < quota[f]; ++i)
                manifest.records[members[cursor++]].fold = int(f) + 1;
            fold_totals[f] += quota[f];
        }
    }

    manifest.fold_count = k;
}

namespace {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(field);
            field.clear();
        } else {
            field += c;
        }
    }
    fields.push_back(field);
    return fields;
}

const char* kHeaderRow =
    "path,class_label,total_spikelets,infected_spikelets,severity_pct,dpi,split,fold";

}  // namespace

std::string write_manifest(const DatasetManifest& manifest) {
    std::string out;
    out += "# voxwheat manifest\n";
    out += "# seed=" + std::to_string(manifest.seed) +
           " test_fraction=" + format_double(manifest.test_fraction) +
           " fold_count=" + std::to_string(manifest.fold_count) + "\n";
    out += kHeaderRow;
    out += "\n";
    for (const auto& rec : manifest.records) {
        if (rec.path.find(',') != std::string::npos || rec.path.find('\n') != std::string::npos)
            throw LabelError("record path contains a delimiter: " + rec.path);
        out += rec.path;
        out += ',';
        if (rec.class_label) out += class_label_name(*rec.class_label);
        out += ',';
        if (rec.total_spikelets) out += std::to_string(*rec.total_spikelets);
        out += ',';
        if (rec.infected_spikelets) out += std::to_string(*rec.infected_spikelets);
        out += ',';
        if (rec.severity_pct) out += format_double(*rec.severity_pct);
        out += ',';
        if (rec.dpi) out += std::to_string(*rec.dpi);
        out += ',';
        out += split_name(rec.split);
        out += ',';
        if (rec.fold) out += std::to_string(*rec.fold);
        out += '\n';
    }
    return out;
}

DatasetManifest read_manifest(std::string_view text) {
    DatasetManifest manifest;
    std::istringstream stream{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;

    while (std::getline(stream, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            // parameter comments are advisory on read
            std::istringstream params(line.substr(1));
            std::string tok;
            while (params >> tok) {
                if (tok.rfind("seed=", 0) == 0) manifest.seed = std::stoull(tok.substr(5));
                else if (tok.rfind("test_fraction=", 0) == 0)
                    manifest.test_fraction = std::stod(tok.substr(14));
                else if (tok.rfind("fold_count=", 0) == 0)
                    manifest.fold_count = std::stoi(tok.substr(11));
            }
            continue;
        }
        if (!header_seen) {
            if (line != kHeaderRow)
                throw ParseError(line_no, "manifest header row mismatch");
            header_seen = true;
            continue;
        }

        auto fields = split_csv_line(line);
        if (fields.size() != 8)
            throw ParseError(line_no, "expected 8 fields, got " + std::to_string(fields.size()));

        SampleRecord rec;
        rec.path = fields[0];
        if (rec.path.empty()) throw ParseError(line_no, "record path is empty");
        try {
            if (!fields[1].empty()) {
                if (fields[1] == "FHB") rec.class_label = ClassLabel::Fhb;
                else if (fields[1] == "WC") rec.class_label = ClassLabel::Wc;
                else throw ParseError(line_no, "class label must be FHB or WC");
            }
            if (!fields[2].empty()) rec.total_spikelets = std::stoi(fields[2]);
            if (!fields[3].empty()) rec.infected_spikelets = std::stoi(fields[3]);
            if (!fields[4].empty()) rec.severity_pct = std::stod(fields[4]);
            if (!fields[5].empty()) rec.dpi = std::stoi(fields[5]);
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception&) {
            throw ParseError(line_no, "bad numeric field");
        }
        if (fields[6].empty()) rec.split = Split::Unassigned;
        else if (fields[6] == "train") rec.split = Split::Train;
        else if (fields[6] == "test") rec.split = Split::Test;
        else throw ParseError(line_no, "split must be train, test, or blank");
        if (!fields[7].empty()) {
            try {
                rec.fold = std::stoi(fields[7]);
            } catch (const std::exception&) {
                throw ParseError(line_no, "bad fold number");
            }
        }

        if (rec.infected_spikelets && rec.total_spikelets &&
            *rec.infected_spikelets > *rec.total_spikelets)
            throw LabelError("infected exceeds total spikelets for " + rec.path);
        if (rec.severity_pct && rec.total_spikelets && rec.infected_spikelets) {
            const double expect = compute_severity(*rec.infected_spikelets, *rec.total_spikelets);
            if (std::abs(expect - *rec.severity_pct) > 1e-9)
                throw LabelError("stored severity disagrees with spikelet counts for " + rec.path);
        }
        manifest.records.push_back(std::move(rec));
    }
    if (!header_seen) throw ParseError(line_no, "manifest lacks a header row");

    // paths must be unique
    std::vector<std::string_view> paths;
    paths.reserve(manifest.records.size());
    for (const auto& rec : manifest.records) paths.push_back(rec.path);
    std::sort(paths.begin(), paths.end());
    auto dup = std::adjacent_find(paths.begin(), paths.end());
    if (dup != paths.end()) throw LabelError("duplicate record path: " + std::string(*dup));

    return manifest;
}

void write_manifest_file(const std::string& path, const DatasetManifest& manifest) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + path + " for writing");
    const std::string text = write_manifest(manifest);
    out.write(text.data(), std::streamsize(text.size()));
    if (!out) throw Error("short write to " + path);
}

DatasetManifest read_manifest_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return read_manifest(text);
}

}  // namespace voxwheat
