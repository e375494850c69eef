#pragma once

// JSON / CSV emission for experiment reports. Output is a pure function of
// the inputs (no timestamps, no addresses), so identical runs produce
// identical bytes. Schema is versioned through a top-level "schema": 1.

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "zeromode/algebra.hpp"
#include "zeromode/asymptotics.hpp"
#include "zeromode/integral_operator.hpp"

namespace zeromode {

using json = nlohmann::json;

inline json json_complex(const complex& c) { return json::array({c.real(), c.imag()}); }

template <std::size_t N>
json json_spinor(const CVec<N>& v) {
    json a = json::array();
    for (std::size_t i = 0; i < N; ++i) a.push_back(json_complex(v[i]));
    return a;
}

inline json json_vec3(Vec3 v) { return json::array({v.x, v.y, v.z}); }

template <typename V>
json json_integral(const IntegralResult<V>& r) {
    return json{{"err_est", r.err_est},
                {"converged", r.converged},
                {"panels", r.panels},
                {"radial_err", r.radial_err},
                {"angular_err", r.angular_err},
                {"tail_bound", r.tail}};
}

inline json json_fit(const LogLogFit& f) {
    return json{{"slope", f.slope},
                {"stderr", f.slope_stderr},
                {"intercept", f.intercept},
                {"residual_rms", f.residual_rms},
                {"points_used", f.points_used},
                {"points_excluded", f.points_excluded}};
}

inline json json_uniformity(const UniformityReport& u) {
    return json{{"r", u.r}, {"max", u.max_dev}, {"median", u.median_dev}, {"ratio", u.ratio}};
}

inline json json_equivalence(const EquivalenceReport& e) {
    return json{{"integral_norm", e.integral_norm},
                {"integral_err", e.integral_err},
                {"limit_modulus", e.limit_modulus},
                {"integral_is_zero", e.integral_is_zero},
                {"limit_is_zero", e.limit_is_zero},
                {"consistent", e.consistent}};
}

inline json json_budget(const ErrorBudget& b) {
    return json{{"r", b.r},
                {"R0", b.R0},
                {"eps", b.eps},
                {"I", json{{"norm", b.part1.value.norm()}, {"err_est", b.part1.err_est}}},
                {"II", json{{"norm", b.part2.value.norm()}, {"err_est", b.part2.err_est}}},
                {"III", json{{"norm", b.part3.value.norm()}, {"err_est", b.part3.err_est}}},
                {"lhs_norm", b.lhs.norm()},
                {"lhs_err", b.lhs_err},
                {"mismatch", b.mismatch},
                {"combined_err", b.combined_err},
                {"sum_ok", b.mismatch <= b.combined_err}};
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

/// Shortest round-trip formatting, stable across runs.
inline std::string csv_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void write_scan_csv(std::ostream& os, const ScanReport& scan,
                           const std::vector<Vec3>& omegas) {
    os << "r,omega_index,omega_x,omega_y,omega_z,deviation\n";
    for (const ScanRow& row : scan.rows) {
        const Vec3 w = omegas[static_cast<std::size_t>(row.omega_index)];
        os << csv_num(row.r) << ',' << row.omega_index << ',' << csv_num(w.x) << ','
           << csv_num(w.y) << ',' << csv_num(w.z) << ',' << csv_num(row.deviation) << '\n';
    }
}

inline void write_budget_csv(std::ostream& os, const std::vector<ErrorBudget>& budgets) {
    os << "r,R0,I_norm,I_err,II_norm,II_err,III_norm,III_err,mismatch,combined_err\n";
    for (const ErrorBudget& b : budgets) {
        os << csv_num(b.r) << ',' << csv_num(b.R0) << ',' << csv_num(b.part1.value.norm())
           << ',' << csv_num(b.part1.err_est) << ',' << csv_num(b.part2.value.norm()) << ','
           << csv_num(b.part2.err_est) << ',' << csv_num(b.part3.value.norm()) << ','
           << csv_num(b.part3.err_est) << ',' << csv_num(b.mismatch) << ','
           << csv_num(b.combined_err) << '\n';
    }
}

inline void write_residual_csv(std::ostream& os, const ResidualReport& rep) {
    os << "x,y,z,residual,err_est\n";
    for (const ResidualRow& row : rep.rows) {
        os << csv_num(row.x.x) << ',' << csv_num(row.x.y) << ',' << csv_num(row.x.z) << ','
           << csv_num(row.residual) << ',' << csv_num(row.err_est) << '\n';
    }
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file: " + path);
    f << content;
}

}  // namespace zeromode
