#pragma once

// Hardware measurement record files: per-family shot counts, one row per
// (family, cycle index). Format:
//
//   # poe-record v1
//   # mode: recurrence | cross_state | subsystem
//   # n_max: <int>
//   # shots: <int>
//   # states: <comma-separated labels>
//   family,k,successes,shots
//   0,0,998,1000
//   ...
//
// Recurrence and subsystem records carry one family; cross-state records
// carry family 0 (forward, a->b) and family 1 (reverse, b->a). Ingested
// counts become probabilities with binomial variance estimates and feed
// the same diagnostics code path as simulated data.

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "poe/io/errors.hpp"
#include "poe/records.hpp"

namespace poe::io {

struct MeasurementRecordFile {
    std::string mode = "recurrence";
    int n_max = 0;
    long long shots = 0;
    std::vector<std::string> state_labels;
    // families[f][k] = (successes, shots)
    std::vector<std::vector<std::pair<long long, long long>>> families;
};

inline MeasurementRecordFile read_record_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open record file '" + path + "'");
    MeasurementRecordFile file;
    std::string line;
    bool header_done = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto colon = line.find(':');
            if (colon == std::string::npos) continue;
            std::string key = line.substr(1, colon - 1);
            std::string value = line.substr(colon + 1);
            const auto trim = [](std::string& s) {
                s.erase(0, s.find_first_not_of(" \t"));
                s.erase(s.find_last_not_of(" \t\r") + 1);
            };
            trim(key);
            trim(value);
            if (key == "mode") file.mode = value;
            else if (key == "n_max") file.n_max = std::stoi(value);
            else if (key == "shots") file.shots = std::stoll(value);
            else if (key == "states") {
                std::istringstream ss(value);
                std::string label;
                while (std::getline(ss, label, ','))
                    file.state_labels.push_back(label);
            }
            continue;
        }
        if (!header_done) {  // column header row
            header_done = true;
            continue;
        }
        std::istringstream ss(line);
        long long fam, k, succ, shots;
        char c1, c2, c3;
        if (!(ss >> fam >> c1 >> k >> c2 >> succ >> c3 >> shots) || c1 != ',' ||
            c2 != ',' || c3 != ',')
            throw std::invalid_argument("record file: malformed row '" + line + "'");
        if (fam < 0) throw std::invalid_argument("record file: negative family");
        if (static_cast<std::size_t>(fam) >= file.families.size())
            file.families.resize(static_cast<std::size_t>(fam) + 1);
        auto& rows = file.families[static_cast<std::size_t>(fam)];
        if (k != static_cast<long long>(rows.size()))
            throw std::invalid_argument("record file: k must be contiguous from 0");
        if (succ < 0 || succ > shots)
            throw std::invalid_argument("record file: successes exceed shots");
        rows.emplace_back(succ, shots);
    }
    if (file.families.empty())
        throw std::invalid_argument("record file: no data rows");
    for (const auto& fam : file.families)
        if (static_cast<int>(fam.size()) != file.n_max + 1)
            throw std::invalid_argument("record file: family length != n_max + 1");
    return file;
}

/// Counts -> probabilities with binomial variance estimates.
inline PoeRecord ingest(const std::string& path) {
    const MeasurementRecordFile file = read_record_file(path);
    PoeRecord rec;
    rec.n_max = file.n_max;
    rec.shots = file.shots;
    rec.meta.state_labels = file.state_labels;
    const auto to_probs = [](const std::vector<std::pair<long long, long long>>& rows,
                             std::vector<double>& values,
                             std::vector<double>& variances) {
        values.resize(rows.size());
        variances.resize(rows.size());
        for (std::size_t k = 0; k < rows.size(); ++k) {
            const double p =
                static_cast<double>(rows[k].first) / static_cast<double>(rows[k].second);
            values[k] = p;
            variances[k] = p * (1.0 - p) / static_cast<double>(rows[k].second);
        }
    };
    if (file.mode == "cross_state") {
        if (file.families.size() != 2)
            throw std::invalid_argument("cross_state record needs exactly 2 families");
        rec.kind = RecordKind::CrossState;
        std::vector<double> var_f, var_r;
        to_probs(file.families[0], rec.forward, var_f);
        to_probs(file.families[1], rec.reverse, var_r);
        rec.values.resize(rec.forward.size());
        rec.variances.resize(rec.forward.size());
        for (std::size_t k = 0; k < rec.values.size(); ++k) {
            rec.values[k] = 0.5 * (rec.forward[k] + rec.reverse[k]);
            rec.variances[k] = 0.25 * (var_f[k] + var_r[k]);
        }
    } else if (file.mode == "recurrence" || file.mode == "subsystem") {
        if (file.families.size() != 1)
            throw std::invalid_argument(file.mode + " record needs exactly 1 family");
        rec.kind = file.mode == "subsystem" ? RecordKind::Subsystem
                                            : RecordKind::Recurrence;
        to_probs(file.families[0], rec.values, rec.variances);
    } else {
        throw std::invalid_argument("record file: unknown mode '" + file.mode + "'");
    }
    return rec;
}

/// Export a sampled record as a count file (exact inverse of ingest for
/// values produced by counting).
inline void write_record_file(const PoeRecord& rec, const std::string& path) {
    if (rec.shots <= 0)
        throw std::invalid_argument("write_record_file: record has no shot counts");
    std::ofstream out(path);
    if (!out) throw IoError("cannot write record file '" + path + "'");
    const char* mode = rec.kind == RecordKind::CrossState ? "cross_state"
                       : rec.kind == RecordKind::Subsystem ? "subsystem"
                                                           : "recurrence";
    out << "# poe-record v1\n";
    out << "# mode: " << mode << "\n";
    out << "# n_max: " << rec.n_max << "\n";
    out << "# shots: " << rec.shots << "\n";
    if (!rec.meta.state_labels.empty()) {
        out << "# states: ";
        for (std::size_t i = 0; i < rec.meta.state_labels.size(); ++i)
            out << (i ? "," : "") << rec.meta.state_labels[i];
        out << "\n";
    }
    out << "family,k,successes,shots\n";
    const auto write_family = [&](int fam, const std::vector<double>& values) {
        for (std::size_t k = 0; k < values.size(); ++k)
            out << fam << ',' << k << ','
                << static_cast<long long>(std::llround(values[k] * rec.shots)) << ','
                << rec.shots << "\n";
    };
    if (rec.kind == RecordKind::CrossState) {
        write_family(0, rec.forward);
        write_family(1, rec.reverse);
    } else {
        write_family(0, rec.values);
    }
    if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace poe::io
