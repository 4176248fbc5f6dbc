#pragma once

#include "trimlasso/model.hpp"

#include <filesystem>
#include <optional>
#include <string>

namespace trimlasso {

/// Round-trip decimal form, 17 significant digits.
std::string format_double(double v);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

/// Comma-separated rows. Lines starting with '#' are comments; the writer
/// emits one first line "# trimlasso <kind> v1 rows=<r> cols=<c>".
std::string matrix_to_csv(const Matrix& M, const std::string& kind);
Matrix matrix_from_csv(const std::string& text);

struct InstanceMeta {
    Index n = 0;
    Index p = 0;
    std::optional<std::uint64_t> seed;
    double snr = 0.0;
    double corr = 0.0;
    Vector beta_true;
};

/// X.csv, y.csv and meta.json inside dir (created if missing).
void write_instance(const std::filesystem::path& dir, const ProblemInstance& inst, const InstanceMeta& meta);
ProblemInstance read_instance(const std::filesystem::path& dir);
std::optional<InstanceMeta> read_meta(const std::filesystem::path& dir);

std::string meta_to_json(const InstanceMeta& meta);

}  // namespace trimlasso
