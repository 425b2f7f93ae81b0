#include "varprod/report_io.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>

#include "json.hpp"
#include "varprod/error.hpp"

namespace varprod {

namespace {

using nlohmann::json;

json matrix_json(const Matrix2& m) { return json::array({{m.a11, m.a12}, {m.a21, m.a22}}); }

Matrix2 matrix_from(const json& j) {
  return {j.at(0).at(0).get<double>(), j.at(0).at(1).get<double>(), j.at(1).at(0).get<double>(),
          j.at(1).at(1).get<double>()};
}

json test_json(const TestResult& t) {
  return {{"name", to_string(t.name)},
          {"statistic", t.statistic},
          {"p_value", t.p_value},
          {"dof", t.dof},
          {"n", t.n}};
}

TestResult test_from(const json& j) {
  TestResult t;
  t.name = test_name_from_string(j.at("name").get<std::string>());
  t.statistic = j.at("statistic").get<double>();
  t.p_value = j.at("p_value").get<double>();
  t.dof = j.at("dof").get<double>();
  t.n = j.at("n").get<std::size_t>();
  return t;
}

json fit_json(const DistributionFit& f) {
  json j = {{"component", f.component}, {"family", f.family}, {"mu", f.mu},
            {"lambda", f.lambda},       {"eta", nullptr},     {"loglik", f.loglik},
            {"ks_p", f.ks_p}};
  if (f.eta) j["eta"] = *f.eta;
  return j;
}

DistributionFit fit_from(const json& j) {
  DistributionFit f;
  f.component = j.at("component").get<int>();
  f.family = j.at("family").get<std::string>();
  f.mu = j.at("mu").get<double>();
  f.lambda = j.at("lambda").get<double>();
  if (!j.at("eta").is_null()) f.eta = j.at("eta").get<double>();
  f.loglik = j.at("loglik").get<double>();
  f.ks_p = j.at("ks_p").get<double>();
  return f;
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count();
  return format_timestamp(secs);
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::string report_to_json(const CaseStudyReport& r, bool include_timestamp) {
  json j;
  j["mu_x"] = r.mu_x;
  j["phi_hat"] = matrix_json(r.fit.phi_hat.matrix());
  j["phi_se"] = matrix_json(r.fit.phi_se);
  j["residual_cov"] = matrix_json(r.fit.residual_cov);
  j["rho_z_hat"] = r.fit.rho_z_hat;
  j["dist_fits"] = json::array();
  for (const auto& f : r.fit.dist_fits) j["dist_fits"].push_back(fit_json(f));
  j["tests"] = json::array();
  for (const auto& t : r.fit.test_results) j["tests"].push_back(test_json(t));
  j["ks_p_values_uncorrected"] = true;
  j["case_tag"] = to_string(r.case_tag);
  j["case1_selected"] = r.case1_selected;
  j["model_phi"] = matrix_json(r.model_phi.matrix());
  j["residual_model"] = r.residual_model;
  j["acvf"] = {{"h", r.theoretical_acvf.lags},
               {"empirical", r.empirical_acvf.values},
               {"theoretical", r.theoretical_acvf.values},
               {"lower", r.band.lower},
               {"upper", r.band.upper}};
  j["band"] = {{"level_low", r.band.level_low},
               {"level_high", r.band.level_high},
               {"reps", r.band.reps},
               {"n", r.band.n}};
  j["coverage_fraction"] = r.coverage_fraction;
  j["seed"] = r.seed;
  if (include_timestamp) j[kGeneratedAtKey] = utc_now();
  return j.dump(2) + "\n";
}

CaseStudyReport report_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("report.json: ") + e.what());
  }
  CaseStudyReport r;
  try {
    r.mu_x = j.at("mu_x").get<double>();
    r.fit.phi_hat = TransitionMatrix::from_matrix(matrix_from(j.at("phi_hat")));
    r.fit.phi_se = matrix_from(j.at("phi_se"));
    r.fit.residual_cov = matrix_from(j.at("residual_cov"));
    r.fit.rho_z_hat = j.at("rho_z_hat").get<double>();
    for (const auto& f : j.at("dist_fits")) r.fit.dist_fits.push_back(fit_from(f));
    for (const auto& t : j.at("tests")) r.fit.test_results.push_back(test_from(t));
    r.case_tag = case_tag_from_string(j.at("case_tag").get<std::string>());
    r.case1_selected = j.at("case1_selected").get<bool>();
    r.model_phi = TransitionMatrix::from_matrix(matrix_from(j.at("model_phi")));
    r.residual_model = j.at("residual_model").get<std::string>();
    const json& a = j.at("acvf");
    r.theoretical_acvf.lags = a.at("h").get<std::vector<int>>();
    r.theoretical_acvf.values = a.at("theoretical").get<std::vector<double>>();
    r.theoretical_acvf.case_tag = r.case_tag;
    r.empirical_acvf.lags = r.theoretical_acvf.lags;
    r.empirical_acvf.values = a.at("empirical").get<std::vector<double>>();
    r.empirical_acvf.case_tag = r.case_tag;
    r.band.lags = r.theoretical_acvf.lags;
    r.band.lower = a.at("lower").get<std::vector<double>>();
    r.band.upper = a.at("upper").get<std::vector<double>>();
    const json& b = j.at("band");
    r.band.level_low = b.at("level_low").get<double>();
    r.band.level_high = b.at("level_high").get<double>();
    r.band.reps = b.at("reps").get<std::size_t>();
    r.band.n = b.at("n").get<std::size_t>();
    r.coverage_fraction = j.at("coverage_fraction").get<double>();
    r.seed = j.at("seed").get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("report.json: ") + e.what());
  }
  return r;
}

std::vector<std::filesystem::path> emit_outputs(const CaseStudyReport& r,
                                                const std::filesystem::path& out_dir,
                                                bool include_timestamp) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create '" + out_dir.string() + "': " + ec.message());

  std::vector<std::filesystem::path> written;

  const auto report_path = out_dir / "report.json";
  {
    auto out = open_for_write(report_path);
    out << report_to_json(r, include_timestamp);
    finish(out, report_path);
  }
  written.push_back(report_path);

  const auto acvf_path = out_dir / "acvf_product.csv";
  {
    auto out = open_for_write(acvf_path);
    out << "h,empirical,theoretical,lower,upper\n";
    for (std::size_t i = 0; i < r.theoretical_acvf.lags.size(); ++i) {
      out << r.theoretical_acvf.lags[i] << ',' << format_double(r.empirical_acvf.values.at(i)) << ','
          << format_double(r.theoretical_acvf.values[i]) << ',' << format_double(r.band.lower.at(i))
          << ',' << format_double(r.band.upper.at(i)) << '\n';
    }
    finish(out, acvf_path);
  }
  written.push_back(acvf_path);

  const auto resid_path = out_dir / "residual_acvf.csv";
  {
    auto out = open_for_write(resid_path);
    out << "h,z1,z2,z1z2,z2z1\n";
    const int hmax = static_cast<int>(r.theoretical_acvf.lags.size()) - 1;
    if (hmax >= 0 && r.residuals.size() > static_cast<std::size_t>(hmax)) {
      const auto& z = r.residuals;
      const auto a1 = empirical_acvf(z.x1, hmax).values;
      const auto a2 = empirical_acvf(z.x2, hmax).values;
      const auto c12 = empirical_ccvf(z.x1, z.x2, hmax).values;
      const auto c21 = empirical_ccvf(z.x2, z.x1, hmax).values;
      for (int h = 0; h <= hmax; ++h) {
        out << h << ',' << format_double(a1[h]) << ',' << format_double(a2[h]) << ','
            << format_double(c12[h]) << ',' << format_double(c21[h]) << '\n';
      }
    }
    finish(out, resid_path);
  }
  written.push_back(resid_path);

  const auto traj_path = out_dir / "trajectory.csv";
  {
    auto out = open_for_write(traj_path);
    out << "t,x1,x2\n";
    for (std::size_t t = 0; t < r.trajectory.size(); ++t) {
      out << (t + 1) << ',' << format_double(r.trajectory.x1[t]) << ','
          << format_double(r.trajectory.x2[t]) << '\n';
    }
    finish(out, traj_path);
  }
  written.push_back(traj_path);
  return written;
}

}  // namespace varprod
