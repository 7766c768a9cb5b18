#include "honeycomb/report.hpp"

#include "honeycomb/errors.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace honeycomb {

namespace {

Json vec_json(const Vec2& v) { return Json::array({v(0), v(1)}); }

std::string hex(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Json coeffs_json(const Eigen::VectorXcd& c) {
  Json arr = Json::array();
  for (Eigen::Index i = 0; i < c.size(); ++i) arr.push_back(cplx_json(c(i)));
  return arr;
}

Eigen::VectorXcd json_coeffs(const Json& j) {
  Eigen::VectorXcd c(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) c(static_cast<Eigen::Index>(i)) = json_cplx(j[i]);
  return c;
}

Json cone_sample_json(const ConeSample& s) {
  return {{"radius", s.radius}, {"angle", s.angle},       {"mu_plus", s.mu_plus},
          {"mu_minus", s.mu_minus}, {"e_plus", s.e_plus}, {"e_minus", s.e_minus}};
}

}  // namespace

Json cplx_json(cplx z) { return Json::array({z.real(), z.imag()}); }

cplx json_cplx(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw ConfigError("complex number must be a [re, im] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

Json dirac_point_json(const DiracPointData& dp, const std::optional<ConeFit>& cone) {
  Json j;
  j["mu_star"] = dp.mu_star;
  j["b1"] = dp.b1;
  j["cutoff"] = dp.cutoff;
  j["lambda_sharp"] = cplx_json(dp.lambda_sharp);
  j["lambda_sharp_abs"] = std::abs(dp.lambda_sharp);
  Json est;
  est["inner_product"] = cplx_json(dp.estimates.inner_product);
  est["cone_fit"] = dp.estimates.cone_fit;
  if (dp.estimates.fourier_sum) est["fourier_sum"] = cplx_json(*dp.estimates.fourier_sum);
  j["estimates"] = est;
  j["degeneracy_gap"] = dp.degeneracy_gap;
  j["isolation_gap"] = dp.isolation_gap;
  j["tolerance"] = dp.tolerance;
  j["residual"] = dp.residual;
  if (cone) {
    Json c;
    c["slope"] = cone->slope;
    c["quadratic"] = cone->quadratic;
    c["fit_residual"] = cone->fit_residual;
    c["isotropy_spread"] = cone->isotropy_spread;
    c["lipschitz_constant"] = cone->lipschitz_constant;
    c["validity_radius"] = cone->validity_radius;
    c["validity_bounded"] = cone->validity_bounded;
    c["ring_max_e"] = cone->ring_max_e;
    Json rows = Json::array();
    for (const auto& s : cone->samples) rows.push_back(cone_sample_json(s));
    c["samples"] = rows;
    j["cone"] = c;
  }
  Json table = Json::array();
  for (const auto& s : dp.cone_residuals) table.push_back(cone_sample_json(s));
  j["cone_residuals"] = table;
  j["phi1"] = coeffs_json(dp.phi1);
  j["phi2"] = coeffs_json(dp.phi2);
  return j;
}

DiracPointData dirac_point_from_json(const Json& j) {
  try {
    DiracPointData dp;
    dp.mu_star = j.at("mu_star").get<double>();
    dp.b1 = j.at("b1").get<int>();
    dp.cutoff = j.at("cutoff").get<int>();
    dp.lambda_sharp = json_cplx(j.at("lambda_sharp"));
    const auto& est = j.at("estimates");
    dp.estimates.inner_product = json_cplx(est.at("inner_product"));
    dp.estimates.cone_fit = est.value("cone_fit", 0.0);
    if (est.contains("fourier_sum")) dp.estimates.fourier_sum = json_cplx(est["fourier_sum"]);
    dp.degeneracy_gap = j.value("degeneracy_gap", 0.0);
    dp.isolation_gap = j.value("isolation_gap", 0.0);
    dp.tolerance = j.value("tolerance", 0.0);
    dp.residual = j.value("residual", 0.0);
    dp.phi1 = json_coeffs(j.at("phi1"));
    dp.phi2 = json_coeffs(j.at("phi2"));
    if (dp.phi1.size() != PlaneWaveBasis(dp.cutoff).size() || dp.phi2.size() != dp.phi1.size()) {
      throw ConfigError("Dirac point coefficients do not match cutoff " + std::to_string(dp.cutoff));
    }
    return dp;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed Dirac point record: ") + e.what());
  }
}

Json simulation_report_json(const SimulationReport& rep) {
  Json j;
  j["kind"] = rep.kind;
  j["config_hash"] = hex(rep.config_hash);
  j["potential_hash"] = hex(rep.potential_hash);
  j["cutoff"] = rep.cutoff;
  j["p"] = rep.p;
  j["rho"] = rep.rho;
  j["eps1"] = rep.eps1;
  j["mu_star"] = rep.mu_star;
  j["lambda_sharp"] = cplx_json(rep.lambda_sharp);
  Json rows = Json::array();
  for (const auto& r : rep.rows) {
    Json row;
    row["delta"] = r.delta;
    row["t_theory"] = r.t_theory;
    row["t_final"] = r.t_final;
    row["capped"] = r.capped;
    row["sup_eta"] = r.sup_eta;
    row["sup_relative"] = r.sup_relative;
    row["sup_relative_gradient"] = r.sup_relative_gradient;
    row["t0_error"] = r.t0_error;
    row["max_norm_drift"] = r.max_norm_drift;
    row["plancherel_residual"] = r.plancherel_residual;
    row["envelope_tail"] = r.envelope_tail;
    row["cells"] = r.cells;
    row["grid"] = r.grid;
    row["fibers_kept"] = r.fibers_kept;
    row["runtime_s"] = r.runtime;
    Json samples = Json::array();
    for (const auto& s : r.samples) {
      samples.push_back({{"t", s.t}, {"eta", s.eta}, {"relative", s.relative}, {"grad_x1", s.grad_x1},
                         {"grad_x2", s.grad_x2}, {"psi_norm", s.psi_norm}});
    }
    row["samples"] = samples;
    rows.push_back(row);
  }
  j["rows"] = rows;
  j["tau_star"] = rep.tau_star ? Json(*rep.tau_star) : Json(nullptr);
  j["monotone"] = rep.monotone;
  j["pass"] = rep.pass;
  j["diagnostics"] = rep.diagnostics;
  return j;
}

Json ballistic_json(const BallisticReport& rep) {
  Json centers = Json::array();
  for (const auto& c : rep.centers) centers.push_back(vec_json(c));
  return {{"kind", "ballistic"},
          {"ktilde", vec_json(rep.ktilde)},
          {"band", rep.band},
          {"delta", rep.delta},
          {"t_final", rep.t_final},
          {"group_velocity", vec_json(rep.group_velocity)},
          {"measured_velocity", vec_json(rep.measured_velocity)},
          {"velocity_deviation", rep.velocity_deviation},
          {"drift", rep.drift},
          {"envelope_width", rep.envelope_width},
          {"width_change", rep.width_change},
          {"contamination", rep.contamination},
          {"cells", rep.cells},
          {"times", rep.times},
          {"centers", centers}};
}

Json effective_mass_json(const EffectiveMassReport& rep) {
  return {{"kind", "effmass"},
          {"ktilde", vec_json(rep.ktilde)},
          {"band", rep.band},
          {"delta", rep.delta},
          {"t_final", rep.t_final},
          {"a_eff", Json::array({Json::array({rep.a_eff(0, 0), rep.a_eff(0, 1)}),
                                 Json::array({rep.a_eff(1, 0), rep.a_eff(1, 1)})})},
          {"isotropy_offdiag", rep.isotropy_offdiag},
          {"field_deviation", rep.field_deviation},
          {"variance_growth_deviation", rep.variance_growth_deviation},
          {"eccentricity", rep.eccentricity},
          {"cells", rep.cells},
          {"times", rep.times},
          {"variance_measured", rep.variance_measured},
          {"variance_predicted", rep.variance_predicted}};
}

Json lipschitz_json(const LipschitzReport& rep) {
  return {{"kind", "lipschitz"},
          {"cutoff", rep.cutoff},
          {"npairs", rep.npairs},
          {"max_quotient", rep.max_quotient},
          {"overall_max", rep.overall_max},
          {"argmax_k1", vec_json(rep.argmax_k1)},
          {"argmax_k2", vec_json(rep.argmax_k2)}};
}

void write_scaling_csv(const std::string& path, const SimulationReport& rep) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw DomainError("cannot write " + path);
  std::fprintf(f, "delta,t_final,sup_rel_err,t_theory,capped,sup_rel_grad\n");
  for (const auto& r : rep.rows) {
    std::fprintf(f, "%.17g,%.17g,%.17g,%.17g,%d,%.17g\n", r.delta, r.t_final, r.sup_relative, r.t_theory,
                 r.capped ? 1 : 0, r.sup_relative_gradient);
  }
  std::fclose(f);
}

void write_json(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace honeycomb
