#include "xipsi/descriptor.hpp"

#include <memory>

#include "xipsi/errors.hpp"
#include "xipsi/families.hpp"
#include "xipsi/twoparam.hpp"

namespace xipsi::descriptor {

using nlohmann::json;
namespace fam = xipsi::families;

namespace {

double number(const json& d, const char* key) {
  if (!d.contains(key)) throw DomainError(std::string("descriptor: missing field '") + key + "'");
  if (!d.at(key).is_number()) throw DomainError(std::string("descriptor: field '") + key + "' must be a number");
  return d.at(key).get<double>();
}

double number_or(const json& d, const char* key, double dflt) {
  return d.contains(key) ? number(d, key) : dflt;
}

std::string family_of(const json& d) {
  if (!d.is_object()) throw DomainError("descriptor: expected a JSON object");
  if (!d.contains("family") || !d.at("family").is_string())
    throw DomainError("descriptor: missing string field 'family'");
  return d.at("family").get<std::string>();
}

fam::FrechetMixture frechet(const json& d) {
  const double w_m = number_or(d, "w_m", 0.0);
  const double w_w = number_or(d, "w_w", 0.0);
  return fam::FrechetMixture::make(number_or(d, "w_pi", 1.0 - w_m - w_w), w_m, w_w);
}

fam::OrdinalSumPi ordinal_sum(const json& d) {
  if (!d.contains("intervals") || !d.at("intervals").is_array())
    throw DomainError("descriptor: ordinal_sum needs an 'intervals' array");
  std::vector<std::pair<double, double>> iv;
  for (const auto& e : d.at("intervals")) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
      throw DomainError("descriptor: each interval must be [a, b]");
    iv.emplace_back(e[0].get<double>(), e[1].get<double>());
  }
  return fam::OrdinalSumPi(std::move(iv));
}

fam::CheckerboardMatrix checkerboard(const json& d) {
  if (!d.contains("delta") || !d.at("delta").is_array())
    throw DomainError("descriptor: checkerboard needs a 'delta' matrix");
  std::vector<std::vector<double>> m;
  for (const auto& row : d.at("delta")) {
    if (!row.is_array()) throw DomainError("descriptor: 'delta' must be an array of rows");
    std::vector<double> r;
    for (const auto& x : row) {
      if (!x.is_number()) throw DomainError("descriptor: 'delta' entries must be numbers");
      r.push_back(x.get<double>());
    }
    m.push_back(std::move(r));
  }
  return fam::CheckerboardMatrix(std::move(m));
}

double theta_of(const json& d) {
  if (d.contains("theta")) return number(d, "theta");
  return number(d, "rho");
}

bool is_parametric(const std::string& f) {
  return f == "gaussian" || f == "clayton" || f == "frank" || f == "gumbel" ||
         f == "gumbel_hougaard" || f == "joe";
}

}  // namespace

gridcop::MeasureReport measures(const json& d, const Options& opt) {
  const std::string f = family_of(d);
  if (f == "frechet") return fam::frechet_measures(frechet(d), opt.grid_n);
  if (f == "ordinal_sum") return fam::ordinal_sum_measures(ordinal_sum(d));
  if (f == "checkerboard") return fam::checkerboard_measures(checkerboard(d));
  if (f == "cdown") return fam::cdown_measures(number(d, "mu"));
  if (f == "strip") {
    return twoparam::StripCopula::build(number(d, "alpha"), number(d, "beta")).measures(opt.quad_tol);
  }
  if (f == "strip_path") return twoparam::strip_path(number(d, "mu")).measures(opt.quad_tol);
  if (is_parametric(f)) {
    const fam::ParametricCopula p(fam::family_from_string(f), theta_of(d));
    if (p.family == fam::Family::gaussian) return fam::gaussian_measures(p.theta);
    return fam::parametric_measures_grid(p, opt.grid_n);
  }
  throw DomainError("descriptor: unknown family '" + f + "'");
}

gridcop::PartialFn partial(const json& d) {
  const std::string f = family_of(d);
  if (f == "frechet") {
    return [w = frechet(d)](double t, double v) { return fam::frechet_partial(w, t, v); };
  }
  if (f == "ordinal_sum") {
    return [o = ordinal_sum(d)](double t, double v) { return fam::ordinal_sum_partial(o, t, v); };
  }
  if (f == "checkerboard") {
    auto cb = std::make_shared<fam::CheckerboardMatrix>(checkerboard(d));
    return [cb](double t, double v) { return fam::checkerboard_partial(*cb, t, v); };
  }
  if (f == "cdown") {
    return [c = fam::CDownMu(number(d, "mu"))](double t, double v) { return fam::cdown_partial(c, t, v); };
  }
  if (f == "strip" || f == "strip_path") {
    auto sc = std::make_shared<twoparam::StripCopula>(
        f == "strip" ? twoparam::StripCopula::build(number(d, "alpha"), number(d, "beta"))
                     : twoparam::strip_path(number(d, "mu")));
    return [sc](double t, double v) { return sc->partial(t, v); };
  }
  if (is_parametric(f)) {
    const fam::ParametricCopula p(fam::family_from_string(f), theta_of(d));
    return [p](double t, double v) { return fam::parametric_partial(p, t, v); };
  }
  throw DomainError("descriptor: unknown family '" + f + "'");
}

json to_json(const gridcop::MeasureReport& r) {
  json j;
  j["xi"] = r.xi;
  j["psi"] = r.psi;
  j["tau"] = r.tau ? json(*r.tau) : json(nullptr);
  j["method"] = gridcop::to_string(r.method);
  if (r.method == gridcop::Method::grid)
    j["n"] = static_cast<std::size_t>(r.n_or_tol);
  else if (r.method == gridcop::Method::quadrature)
    j["tol"] = r.n_or_tol;
  else
    j["n"] = nullptr;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

}  // namespace xipsi::descriptor
