#include "trimlasso/io.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace trimlasso {

std::string format_double(double v)
{
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string read_text(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidArgument("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidArgument("cannot write " + path.string());
    out << text;
    if (!out) throw InvalidArgument("write failed for " + path.string());
}

std::string matrix_to_csv(const Matrix& M, const std::string& kind)
{
    std::ostringstream out;
    out << "# trimlasso " << kind << " v1 rows=" << M.rows() << " cols=" << M.cols() << "\n";
    for (Index i = 0; i < M.rows(); ++i) {
        for (Index j = 0; j < M.cols(); ++j) {
            if (j) out << ',';
            out << format_double(M(i, j));
        }
        out << '\n';
    }
    return out.str();
}

Matrix matrix_from_csv(const std::string& text)
{
    std::vector<std::vector<double>> rows;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::vector<double> row;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            if (cell.empty() || end == cell.c_str()) {
                throw InvalidArgument("CSV line " + std::to_string(lineno) + ": bad number '" + cell + "'");
            }
            row.push_back(v);
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw InvalidArgument("CSV line " + std::to_string(lineno) + ": ragged row");
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) return Matrix(0, 0);
    Matrix M(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows[i].size(); ++j) M(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    }
    return M;
}

std::string meta_to_json(const InstanceMeta& meta)
{
    nlohmann::ordered_json j;
    j["n"] = meta.n;
    j["p"] = meta.p;
    if (meta.seed) j["seed"] = *meta.seed;
    else j["seed"] = nullptr;
    if (std::isfinite(meta.snr)) j["snr"] = meta.snr;
    else j["snr"] = "inf";
    j["corr"] = meta.corr;
    j["beta_true"] = std::vector<double>(meta.beta_true.data(), meta.beta_true.data() + meta.beta_true.size());
    return j.dump(2) + "\n";
}

void write_instance(const std::filesystem::path& dir, const ProblemInstance& inst, const InstanceMeta& meta)
{
    std::filesystem::create_directories(dir);
    write_text(dir / "X.csv", matrix_to_csv(inst.X(), "X"));
    write_text(dir / "y.csv", matrix_to_csv(inst.y(), "y"));
    write_text(dir / "meta.json", meta_to_json(meta));
}

ProblemInstance read_instance(const std::filesystem::path& dir)
{
    Matrix X = matrix_from_csv(read_text(dir / "X.csv"));
    const Matrix Y = matrix_from_csv(read_text(dir / "y.csv"));
    if (Y.cols() != 1) throw InvalidArgument("y.csv must have exactly one column");
    return ProblemInstance(Vector(Y.col(0)), std::move(X));
}

std::optional<InstanceMeta> read_meta(const std::filesystem::path& dir)
{
    const auto path = dir / "meta.json";
    if (!std::filesystem::exists(path)) return std::nullopt;
    try {
        const auto j = nlohmann::json::parse(read_text(path));
        InstanceMeta m;
        m.n = j.at("n").get<Index>();
        m.p = j.at("p").get<Index>();
        if (!j.at("seed").is_null()) m.seed = j.at("seed").get<std::uint64_t>();
        m.snr = j.at("snr").is_string() ? std::numeric_limits<double>::infinity() : j.at("snr").get<double>();
        m.corr = j.at("corr").get<double>();
        const auto bt = j.at("beta_true").get<std::vector<double>>();
        m.beta_true = Eigen::Map<const Vector>(bt.data(), static_cast<Index>(bt.size()));
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument("meta.json: " + std::string(e.what()));
    }
}

}  // namespace trimlasso
