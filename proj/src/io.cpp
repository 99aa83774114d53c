// io.cpp

#include "asymcoh/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace asymcoh {

namespace {

std::string csv_num(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

} // namespace

Json matrix_to_json(const Matrix& m) {
    Json entries = Json::array();
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j)
            entries.push_back({m(i, j).real(), m(i, j).imag()});
    return Json{{"dim", m.rows()}, {"entries", entries}};
}

Matrix matrix_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("dim") || !j.contains("entries"))
        fail("ParseError", "matrix JSON needs \"dim\" and \"entries\"");
    const Index d = j.at("dim").get<Index>();
    if (d < 1) fail("ParseError", "dim must be positive");
    const auto& entries = j.at("entries");
    if (!entries.is_array() || static_cast<Index>(entries.size()) != d * d)
        fail("ParseError", "entries must hold dim*dim [re, im] pairs");
    Matrix m(d, d);
    Index pos = 0;
    for (const auto& e : entries) {
        if (!e.is_array() || e.size() != 2) fail("ParseError", "entry is not an [re, im] pair");
        const double re = e[0].get<double>();
        const double im = e[1].get<double>();
        if (!std::isfinite(re) || !std::isfinite(im))
            fail("NotFinite", "matrix entry is not finite");
        m(pos / d, pos % d) = Complex(re, im);
        ++pos;
    }
    return m;
}

Matrix load_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("FileNotFound", path);
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        fail("ParseError", path + ": " + e.what());
    }
    return matrix_from_json(j);
}

DensityMatrix load_density_matrix(const std::string& path, double tol) {
    return DensityMatrix::validated(load_matrix(path), tol);
}

GeneratorObservable load_generator(const std::string& path_or_name) {
    if (path_or_name == "sigmax") return GeneratorObservable::pauli_x();
    if (path_or_name == "sigmay") return GeneratorObservable::pauli_y();
    if (path_or_name == "sigmaz") return GeneratorObservable::pauli_z();
    if (path_or_name.rfind("diag:", 0) == 0) {
        std::vector<double> values;
        std::stringstream ss(path_or_name.substr(5));
        std::string token;
        while (std::getline(ss, token, ',')) {
            try {
                values.push_back(std::stod(token));
            } catch (const std::exception&) {
                fail("ParseError", "bad diag value: " + token);
            }
        }
        if (values.empty()) fail("ParseError", "diag: needs at least one value");
        return GeneratorObservable::from_diagonal(values);
    }
    return GeneratorObservable::validated(load_matrix(path_or_name));
}

Json to_json(const OrthonormalBasis& basis) {
    Json vectors = Json::array();
    for (Index i = 0; i < basis.dim(); ++i) {
        Json v = Json::array();
        for (Index r = 0; r < basis.dim(); ++r)
            v.push_back({basis.matrix()(r, i).real(), basis.matrix()(r, i).imag()});
        vectors.push_back(v);
    }
    return Json{{"dim", basis.dim()}, {"vectors", vectors}};
}

Json to_json(const CoherenceResult& result) {
    Json j{{"value", result.value},
           {"gap", result.gap},
           {"restarts_run", result.restarts_run},
           {"iterations", result.iterations},
           {"evaluations", result.evaluations},
           {"converged", result.converged},
           {"seed", result.seed},
           {"argmax_basis", to_json(result.argmax_basis)}};
    if (result.has_oracle)
        j["oracle_value"] = result.oracle_value;
    else
        j["oracle_value"] = nullptr;
    return j;
}

Json to_json(const KDTable& table) {
    Json rows = Json::array();
    for (Index k = 0; k < table.dim(); ++k) {
        Json row = Json::array();
        for (Index x = 0; x < table.dim(); ++x)
            row.push_back({table.entry(k, x).real(), table.entry(k, x).imag()});
        rows.push_back(row);
    }
    return Json{{"dim", table.dim()},
                {"entries", rows},
                {"row_marginal_deviation", table.row_marginal_deviation()},
                {"col_marginal_deviation", table.col_marginal_deviation()},
                {"total_sum_deviation", table.total_sum_deviation()},
                {"abs_imaginary_total", table.abs_imaginary_total()}};
}

Json to_json(const BoundsReport& report) {
    Json j{{"c_w", report.c_w},
           {"c_w_normalized", report.c_w_normalized},
           {"std_dev", report.std_dev},
           {"qfi", report.qfi},
           {"kd_im_bound", report.kd_im_bound},
           {"slack_std_dev", report.slack_std_dev},
           {"slack_qfi", report.slack_qfi},
           {"slack_kd", report.slack_kd},
           {"std_dev_ok", report.std_dev_ok},
           {"qfi_ok", report.qfi_ok},
           {"kd_ok", report.kd_ok}};
    if (report.kwr_bound)
        j["kwr_bound"] = *report.kwr_bound;
    else
        j["kwr_bound"] = nullptr;
    return j;
}

Json to_json(const PropertyReport& report) {
    Json checks = Json::array();
    for (const auto& c : report.checks)
        checks.push_back({{"name", c.name},
                          {"instances", c.instances},
                          {"max_violation", c.max_violation},
                          {"tolerance", c.tolerance},
                          {"pass", c.pass}});
    return Json{{"dim", report.dim},
                {"dim_ancilla", report.dim_ancilla},
                {"instances", report.instances},
                {"seed", report.seed},
                {"checks", checks},
                {"all_pass", report.all_pass()}};
}

Json to_json(const EstimationRecord& record) {
    return Json{{"shots", record.shots},
                {"delta", record.delta},
                {"estimate", record.estimate},
                {"stderr", record.stderr_est},
                {"optimizer_best", record.optimizer_best},
                {"exact", record.exact},
                {"seed", record.seed},
                {"iterations", record.iterations},
                {"replicates", record.replicates}};
}

Json to_json(const ConvergenceStudy& study) {
    Json rows = Json::array();
    for (const auto& row : study.rows) {
        Json r{{"shots", row.shots}, {"mean_abs_error", row.mean_abs_error}};
        if (study.has_stderr) r["stderr"] = row.stderr_est;
        rows.push_back(r);
    }
    return Json{{"rows", rows}, {"slope_fit", study.slope_fit}, {"has_stderr", study.has_stderr}};
}

std::string to_csv(const KDTable& table) {
    std::ostringstream os;
    os << "k,x,re,im\n";
    for (Index k = 0; k < table.dim(); ++k)
        for (Index x = 0; x < table.dim(); ++x)
            os << k << ',' << x << ',' << csv_num(table.entry(k, x).real()) << ','
               << csv_num(table.entry(k, x).imag()) << '\n';
    return os.str();
}

std::string to_csv(const BoundsReport& report) {
    std::ostringstream os;
    os << "c_w,c_w_normalized,std_dev,qfi,kd_im_bound,kwr_bound,"
          "slack_std_dev,slack_qfi,slack_kd,std_dev_ok,qfi_ok,kd_ok\n";
    os << csv_num(report.c_w) << ',' << csv_num(report.c_w_normalized) << ','
       << csv_num(report.std_dev) << ',' << csv_num(report.qfi) << ','
       << csv_num(report.kd_im_bound) << ','
       << (report.kwr_bound ? csv_num(*report.kwr_bound) : std::string()) << ','
       << csv_num(report.slack_std_dev) << ',' << csv_num(report.slack_qfi) << ','
       << csv_num(report.slack_kd) << ',' << (report.std_dev_ok ? 1 : 0) << ','
       << (report.qfi_ok ? 1 : 0) << ',' << (report.kd_ok ? 1 : 0) << '\n';
    return os.str();
}

std::string to_csv(const ConvergenceStudy& study) {
    std::ostringstream os;
    os << (study.has_stderr ? "shots,mean_abs_error,stderr\n" : "shots,mean_abs_error\n");
    for (const auto& row : study.rows) {
        os << row.shots << ',' << csv_num(row.mean_abs_error);
        if (study.has_stderr) os << ',' << csv_num(row.stderr_est);
        os << '\n';
    }
    os << "slope_fit," << csv_num(study.slope_fit);
    if (study.has_stderr) os << ',';
    os << '\n';
    return os.str();
}

std::string to_table(const PropertyReport& report) {
    std::ostringstream os;
    os << "property suite: d = " << report.dim << ", d_a = " << report.dim_ancilla
       << ", instances = " << report.instances << ", seed = " << report.seed << "\n";
    os << std::left << std::setw(32) << "check" << std::setw(12) << "instances" << std::setw(16)
       << "max violation" << std::setw(12) << "tolerance" << "status\n";
    for (const auto& c : report.checks) {
        std::ostringstream violation, tol;
        violation << std::scientific << std::setprecision(2) << c.max_violation;
        tol << std::scientific << std::setprecision(0) << c.tolerance;
        os << std::left << std::setw(32) << c.name << std::setw(12) << c.instances
           << std::setw(16) << violation.str() << std::setw(12) << tol.str()
           << (c.pass ? "pass" : "FAIL") << "\n";
    }
    os << (report.all_pass() ? "all checks passed" : "SUITE FAILED") << "\n";
    return os.str();
}

} // namespace asymcoh
