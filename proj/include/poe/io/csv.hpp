#pragma once

// CSV emission: RFC-4180 style, mandatory header row, '.' decimal
// separator, 17 significant digits so re-ingested values compare exactly.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>

#include "poe/diagnostics.hpp"
#include "poe/io/errors.hpp"
#include "poe/records.hpp"

namespace poe::io {

inline std::string format_full(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline void write_series_csv(std::ostream& out, const SnSeries& s,
                             const FitReport& fit) {
    out << "n,S_n,ln_S_n,variance,residual_ppt\n";
    for (std::size_t i = 0; i < s.values.size(); ++i) {
        const double v = s.values[i];
        out << (i + 1) << ',' << format_full(v) << ','
            << format_full(v > 0.0 ? std::log(v) : std::nan("")) << ','
            << format_full(s.variances[i]) << ','
            << format_full(i < fit.residuals_ppt.size() ? fit.residuals_ppt[i]
                                                        : std::nan(""))
            << "\n";
    }
}

inline void write_comparison_csv(std::ostream& out, const SeriesComparison& cmp) {
    out << "n,diff_ppt,variance\n";
    for (std::size_t i = 0; i < cmp.diff_ppt.size(); ++i)
        out << (i + 1) << ',' << format_full(cmp.diff_ppt[i]) << ','
            << format_full(cmp.variances[i]) << "\n";
}

/// Write-temp-then-rename so partially written outputs never appear.
template <typename WriteFn>
inline void atomic_write(const std::string& path, WriteFn&& fn) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(target.parent_path(), ec);
        if (ec) throw IoError("cannot create directory for '" + path + "'");
    }
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw IoError("cannot open '" + tmp + "' for writing");
        fn(out);
        if (!out) throw IoError("write failed for '" + tmp + "'");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) throw IoError("cannot rename '" + tmp + "' to '" + path + "'");
}

}  // namespace poe::io
