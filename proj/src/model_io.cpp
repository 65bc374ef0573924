#include "ffmor/model_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace ffmor {

namespace fs = std::filesystem;
using nlohmann::json;

static std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

static json matrix_to_json(const Matrix& M, bool real) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < M.cols(); ++j) {
            if (real)
                row.push_back(M(i, j).real());
            else
                row.push_back(json::array({M(i, j).real(), M(i, j).imag()}));
        }
        rows.push_back(row);
    }
    return rows;
}

static Matrix matrix_from_json(const json& j, const std::string& name) {
    if (!j.is_array() || j.empty())
        throw ParseError("matrix " + name + " must be a non-empty array of rows");
    const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
    const Eigen::Index cols = static_cast<Eigen::Index>(j.at(0).size());
    Matrix M(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const json& row = j.at(i);
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
            throw ParseError("matrix " + name + " row " + std::to_string(i) +
                             " has inconsistent length");
        for (Eigen::Index k = 0; k < cols; ++k) {
            const json& e = row.at(k);
            if (e.is_number())
                M(i, k) = Complex(e.get<double>(), 0.0);
            else if (e.is_array() && e.size() == 2)
                M(i, k) = Complex(e.at(0).get<double>(), e.at(1).get<double>());
            else
                throw ParseError("matrix " + name + " entry (" + std::to_string(i) +
                                 "," + std::to_string(k) +
                                 ") must be a number or [re,im] pair");
        }
    }
    return M;
}

static StateSpaceModel load_native_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
    for (const char* key : {"n", "m", "p", "time_domain", "A", "B", "C", "D"})
        if (!j.contains(key)) throw ParseError(path + ": missing field " + key);
    Matrix A = matrix_from_json(j["A"], "A");
    Matrix B = matrix_from_json(j["B"], "B");
    Matrix C = matrix_from_json(j["C"], "C");
    Matrix D = matrix_from_json(j["D"], "D");
    const auto n = j["n"].get<Eigen::Index>();
    const auto m = j["m"].get<Eigen::Index>();
    const auto p = j["p"].get<Eigen::Index>();
    if (A.rows() != n || A.cols() != n)
        throw DimensionMismatch("A does not match declared n=" + std::to_string(n));
    if (B.rows() != n || B.cols() != m)
        throw DimensionMismatch("B does not match declared n=" + std::to_string(n) +
                                ", m=" + std::to_string(m));
    if (C.rows() != p || C.cols() != n)
        throw DimensionMismatch("C does not match declared p=" + std::to_string(p) +
                                ", n=" + std::to_string(n));
    const std::string domain = j["time_domain"].get<std::string>();
    if (domain != "continuous" && domain != "discrete")
        throw ParseError(path + ": time_domain must be continuous or discrete");
    return make_model(A, B, C, D,
                      domain == "continuous" ? TimeDomain::Continuous
                                             : TimeDomain::Discrete);
}

// Minimal MatrixMarket reader: array or coordinate, real or complex,
// general symmetry only.
static Matrix load_matrix_market(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw ParseError(path + ": empty file");
    std::istringstream header(line);
    std::string banner, object, format, field, symmetry;
    header >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%MatrixMarket" || object != "matrix")
        throw ParseError(path + ": not a MatrixMarket matrix file");
    if (format != "array" && format != "coordinate")
        throw ParseError(path + ": unsupported format " + format);
    if (field != "real" && field != "complex" && field != "integer")
        throw ParseError(path + ": unsupported field " + field);
    if (symmetry != "general")
        throw ParseError(path + ": only general symmetry is supported");
    const bool complex_field = field == "complex";

    std::size_t lineno = 1;
    auto next_data_line = [&](std::istringstream& out) {
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty() || line[0] == '%') continue;
            out = std::istringstream(line);
            return true;
        }
        return false;
    };

    std::istringstream sizes;
    if (!next_data_line(sizes)) throw ParseError(path + ": missing size line");
    Eigen::Index rows = 0, cols = 0;
    long long nnz = 0;
    if (format == "array") {
        if (!(sizes >> rows >> cols))
            throw ParseError(path + ": bad size line at line " + std::to_string(lineno));
    } else {
        if (!(sizes >> rows >> cols >> nnz))
            throw ParseError(path + ": bad size line at line " + std::to_string(lineno));
    }
    if (rows < 1 || cols < 1) throw ParseError(path + ": non-positive dimensions");
    Matrix M = Matrix::Zero(rows, cols);

    auto read_value = [&](std::istringstream& s) {
        double re = 0.0, im = 0.0;
        if (!(s >> re)) throw ParseError(path + ": bad value at line " + std::to_string(lineno));
        if (complex_field && !(s >> im))
            throw ParseError(path + ": missing imaginary part at line " +
                             std::to_string(lineno));
        return Complex(re, im);
    };

    if (format == "array") {
        // Column-major dense listing.
        for (Eigen::Index j = 0; j < cols; ++j)
            for (Eigen::Index i = 0; i < rows; ++i) {
                std::istringstream s;
                if (!next_data_line(s))
                    throw ParseError(path + ": truncated array data");
                M(i, j) = read_value(s);
            }
    } else {
        for (long long k = 0; k < nnz; ++k) {
            std::istringstream s;
            if (!next_data_line(s))
                throw ParseError(path + ": truncated coordinate data");
            Eigen::Index i = 0, j = 0;
            if (!(s >> i >> j))
                throw ParseError(path + ": bad coordinates at line " +
                                 std::to_string(lineno));
            if (i < 1 || i > rows || j < 1 || j > cols)
                throw ParseError(path + ": index out of range at line " +
                                 std::to_string(lineno));
            M(i - 1, j - 1) = read_value(s);
        }
    }
    return M;
}

static StateSpaceModel load_mm_set(const std::string& dir) {
    auto pick = [&](const std::string& stem) {
        for (const char* ext : {".mtx", ".mm"}) {
            fs::path p = fs::path(dir) / (stem + ext);
            if (fs::exists(p)) return p.string();
        }
        throw IoError(dir + ": missing " + stem + ".mtx");
    };
    Matrix A = load_matrix_market(pick("A"));
    Matrix B = load_matrix_market(pick("B"));
    Matrix C = load_matrix_market(pick("C"));
    Matrix D;
    fs::path dpath = fs::path(dir) / "D.mtx";
    if (fs::exists(dpath) || fs::exists(fs::path(dir) / "D.mm"))
        D = load_matrix_market(pick("D"));
    else
        D = Matrix::Zero(C.rows(), B.cols());
    return make_model(A, B, C, D, TimeDomain::Continuous);
}

StateSpaceModel load_model(const std::string& path, ModelFormat format) {
    if (format == ModelFormat::Auto)
        format = fs::is_directory(path) ? ModelFormat::MatrixMarketSet
                                        : ModelFormat::NativeJson;
    if (format == ModelFormat::MatrixMarketSet) return load_mm_set(path);
    if (!fs::exists(path)) throw IoError("no such file: " + path);
    return load_native_json(path);
}

void save_model(const StateSpaceModel& model, const std::string& path) {
    const bool real = model.scalar_field == ScalarField::Real;
    json j;
    j["n"] = model.order();
    j["m"] = model.num_inputs();
    j["p"] = model.num_outputs();
    j["time_domain"] =
        model.time_domain == TimeDomain::Continuous ? "continuous" : "discrete";
    j["scalar_field"] = real ? "real" : "complex";
    j["A"] = matrix_to_json(model.A, real);
    j["B"] = matrix_to_json(model.B, real);
    j["C"] = matrix_to_json(model.C, real);
    j["D"] = matrix_to_json(model.D, real);
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << j.dump(2) << '\n';
    if (!out) throw IoError("write failed: " + path);
}

void save_sweep(const SigmaSweep& sweep, const std::string& path, SweepFormat format) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    if (format == SweepFormat::Csv) {
        out << "omega,sigma_max\n";
        for (const auto& [w, s] : sweep.points)
            out << fmt17(w) << ',' << fmt17(s) << '\n';
    } else {
        json j;
        j["domain"] = sweep.domain_tag == SweepDomain::ContinuousFreq ? "omega" : "theta";
        json pts = json::array();
        for (const auto& [w, s] : sweep.points) pts.push_back(json::array({w, s}));
        j["points"] = pts;
        out << j.dump(2) << '\n';
    }
    if (!out) throw IoError("write failed: " + path);
}

SigmaSweep load_sweep_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("omega,sigma_max", 0) != 0)
        throw ParseError(path + ": missing omega,sigma_max header");
    SigmaSweep sweep;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw ParseError(path + ": malformed row '" + line + "'");
        sweep.points.emplace_back(std::stod(line.substr(0, comma)),
                                  std::stod(line.substr(comma + 1)));
    }
    return sweep;
}

}  // namespace ffmor
