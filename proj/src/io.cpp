#include "nhs/io.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace nhs {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string csv_escape(const std::string& cell) {
    if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
    std::string out = "\"";
    for (char c : cell) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string cur;
    for (char c : text) {
        if (c == '\n') {
            lines.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) lines.push_back(cur);
    return lines;
}

char hex_digit(std::uint64_t v) { return "0123456789abcdef"[v & 0xf]; }

std::string hex64(std::uint64_t v) {
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i, v >>= 4) s[i] = hex_digit(v);
    return s;
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, end);
}

void write_text(const std::string& path, const std::string& content) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(p.parent_path(), ec);
    }
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + path);
}

void CsvTable::add_row(std::vector<std::string> cells) {
    if (cells.size() != columns.size())
        throw std::runtime_error("csv row width does not match the header");
    rows.push_back(std::move(cells));
}

std::string to_csv(const CsvTable& table) {
    std::ostringstream os;
    for (size_t j = 0; j < table.columns.size(); ++j) {
        if (j) os << ',';
        os << csv_escape(table.columns[j]);
    }
    os << '\n';
    for (const auto& row : table.rows) {
        for (size_t j = 0; j < row.size(); ++j) {
            if (j) os << ',';
            os << csv_escape(row[j]);
        }
        os << '\n';
    }
    return os.str();
}

void write_csv(const std::string& path, const CsvTable& table) {
    write_text(path, to_csv(table));
}

std::string to_json_string(const NormReport& r) {
    ordered_json j;
    j["bmo_N"] = r.bmo_N;
    j["tmo"] = r.tmo;
    j["tent_inf2"] = r.tent_inf2;
    j["tent_inf1"] = r.tent_inf1;
    j["tent_12"] = r.tent_12;
    j["bmo_inv_N"] = r.bmo_inv_N;
    j["weighted_linf"] = r.weighted_linf;
    j["path_eps"] = r.path_eps;
    j["hardy"] = r.hardy;
    j["square_fn_l1"] = r.square_fn_l1;
    j["ball_family"] = r.ball_family;
    j["grid"] = r.grid;
    return j.dump(2) + "\n";
}

std::string to_json_string(const SolverDiagnostics& d) {
    ordered_json j;
    j["verdict"] = d.verdict;
    j["residual"] = d.residual;
    j["contraction_estimate"] = d.contraction_estimate;
    ordered_json rows = ordered_json::array();
    for (const IterationRecord& rec : d.iterations) {
        ordered_json row;
        row["k"] = rec.k;
        row["norm"] = rec.norm;
        row["increment"] = rec.increment;
        row["ratio"] = rec.ratio;
        rows.push_back(row);
    }
    j["iterations"] = rows;
    return j.dump(2) + "\n";
}

void write_field_csv(const std::string& path, const ScalarField& f) {
    const GridSpec& spec = f.spec();
    std::ostringstream os;
    os << "# grid: " << describe(spec) << '\n';
    os << "# nodes: " << spec.node_count() << ", storage: row-major, last axis fastest\n";
    os << "index";
    for (int a = 1; a <= spec.dimension; ++a) os << ",x" << a;
    os << ",value\n";
    std::vector<double> x(spec.dimension);
    for (long i = 0; i < f.size(); ++i) {
        spec.node(i, x);
        os << i;
        for (double c : x) os << ',' << format_double(c);
        os << ',' << format_double(f[i]) << '\n';
    }
    write_text(path, os.str());
}

std::string to_json_string(const RunManifest& m) {
    ordered_json j;
    j["schema_version"] = m.schema_version;
    j["experiment"] = m.experiment;
    j["config_hash"] =
        "fnv1a:" + hex64(fnv1a(std::span<const char>(m.config_echo.data(), m.config_echo.size())));
    j["config"] = split_lines(m.config_echo);
    j["grid"] = m.grid;
    j["ball_family"] = m.ball_family;
    j["kernel_variant"] = m.kernel_variant;
    return j.dump(2) + "\n";
}

void write_manifest(const std::string& path, const RunManifest& m) {
    write_text(path, to_json_string(m));
}

}  // namespace nhs
