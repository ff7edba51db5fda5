#include "gaborzak/io.hpp"

#include <charconv>
#include <fstream>
#include <ostream>

#include "gaborzak/errors.hpp"

namespace gaborzak {

namespace {

using nlohmann::json;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

double number(const json& j, const char* what) {
  if (!j.is_number()) throw ConfigError(std::string("window: ") + what + " must be a number");
  return j.get<double>();
}

cplx complex_value(const json& j, const char* what) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2) return {number(j[0], what), number(j[1], what)};
  throw ConfigError(std::string("window: ") + what + " must be a number or [re, im]");
}

std::vector<cplx> complex_list(const json& j, const char* what) {
  if (!j.is_array() || j.empty()) throw ConfigError(std::string("window: ") + what + " must be a non-empty list");
  std::vector<cplx> out;
  for (const auto& e : j) out.push_back(complex_value(e, what));
  return out;
}

double gamma_of(const json& j) { return j.contains("gamma") ? number(j["gamma"], "gamma") : kPi; }

const json& field(const json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("window: missing field \"") + key + "\"");
  return j[key];
}

ojson complex_json(cplx c) { return ojson::array({c.real(), c.imag()}); }

ojson complex_list_json(const std::vector<cplx>& v) {
  ojson a = ojson::array();
  for (const cplx& c : v) a.push_back(complex_json(c));
  return a;
}

}  // namespace

WindowSpec window_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("window: expected a JSON object");
  if (!j.contains("variant") || !j["variant"].is_string()) {
    throw ConfigError("window: missing string field \"variant\"");
  }
  const std::string v = j["variant"];
  if (v == "gaussian") return WindowSpec(windows::Gaussian{gamma_of(j)});
  if (v == "hermite") {
    const json& n = field(j, "n");
    if (!n.is_number_integer()) throw ConfigError("window: n must be an integer");
    return WindowSpec(windows::Hermite{n.get<int>()});
  }
  if (v == "poly_gaussian") {
    return WindowSpec(windows::PolyGaussian{complex_list(field(j, "coeffs"), "coeffs"), gamma_of(j)});
  }
  if (v == "rational_gaussian") {
    return WindowSpec(windows::RationalGaussian{complex_list(field(j, "coeffs"), "coeffs"),
                                                complex_list(field(j, "den_coeffs"), "den_coeffs"),
                                                gamma_of(j)});
  }
  if (v == "exp_poly_gaussian") {
    windows::ExpPolyGaussian g;
    g.gamma = gamma_of(j);
    const json& terms = field(j, "terms");
    if (!terms.is_array() || terms.empty()) throw ConfigError("window: terms must be a non-empty list");
    for (const auto& t : terms) {
      g.terms.push_back({complex_value(field(t, "a"), "a"), complex_value(field(t, "lambda"), "lambda")});
    }
    return WindowSpec(g);
  }
  if (v == "totally_positive") {
    windows::TotallyPositiveGaussian g;
    g.gamma = gamma_of(j);
    const json& d = field(j, "deltas");
    if (!d.is_array()) throw ConfigError("window: deltas must be a list");
    for (const auto& e : d) g.deltas.push_back(number(e, "deltas"));
    return WindowSpec(g);
  }
  if (v == "shifted_gaussian_combo") {
    windows::ShiftedGaussianCombo g;
    const json& terms = field(j, "terms");
    if (!terms.is_array() || terms.empty()) throw ConfigError("window: terms must be a non-empty list");
    for (const auto& t : terms) {
      g.terms.push_back({complex_value(field(t, "d"), "d"), number(field(t, "a"), "a"),
                         number(field(t, "b"), "b")});
    }
    return WindowSpec(g);
  }
  if (v == "compact_bump") {
    windows::CompactBump g;
    if (j.contains("support")) {
      const json& s = j["support"];
      if (!s.is_array() || s.size() != 2) throw ConfigError("window: support must be [a, b]");
      g.support = {number(s[0], "support"), number(s[1], "support")};
    }
    if (j.contains("smoothness")) g.smoothness = number(j["smoothness"], "smoothness");
    return WindowSpec(g);
  }
  throw ConfigError("window: unknown variant \"" + v + "\"");
}

ojson window_to_json(const WindowSpec& w) {
  return std::visit(
      overloaded{
          [](const windows::Gaussian& g) { return ojson{{"variant", "gaussian"}, {"gamma", g.gamma}}; },
          [](const windows::Hermite& g) { return ojson{{"variant", "hermite"}, {"n", g.n}}; },
          [](const windows::PolyGaussian& g) {
            return ojson{{"variant", "poly_gaussian"}, {"coeffs", complex_list_json(g.coeffs)}, {"gamma", g.gamma}};
          },
          [](const windows::RationalGaussian& g) {
            return ojson{{"variant", "rational_gaussian"},
                         {"coeffs", complex_list_json(g.numerator)},
                         {"den_coeffs", complex_list_json(g.denominator)},
                         {"gamma", g.gamma}};
          },
          [](const windows::ExpPolyGaussian& g) {
            ojson terms = ojson::array();
            for (const auto& t : g.terms) terms.push_back({{"a", complex_json(t.a)}, {"lambda", complex_json(t.lambda)}});
            return ojson{{"variant", "exp_poly_gaussian"}, {"terms", terms}, {"gamma", g.gamma}};
          },
          [](const windows::TotallyPositiveGaussian& g) {
            return ojson{{"variant", "totally_positive"}, {"deltas", g.deltas}, {"gamma", g.gamma}};
          },
          [](const windows::ShiftedGaussianCombo& g) {
            ojson terms = ojson::array();
            for (const auto& t : g.terms) terms.push_back({{"d", complex_json(t.d)}, {"a", t.a}, {"b", t.b}});
            return ojson{{"variant", "shifted_gaussian_combo"}, {"terms", terms}};
          },
          [](const windows::CompactBump& g) {
            return ojson{{"variant", "compact_bump"},
                         {"support", ojson::array({g.support.lo, g.support.hi})},
                         {"smoothness", g.smoothness}};
          },
      },
      w.params());
}

WindowSpec load_window(const std::string& s) {
  if (s == "gaussian") return gaussian_window();
  if (s == "bump") return bump_window();
  if (s.rfind("hermite:", 0) == 0) {
    const std::string digits = s.substr(8);
    int n = -1;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
    if (ec != std::errc{} || ptr != digits.data() + digits.size()) {
      throw ConfigError("window preset: expected hermite:N");
    }
    return hermite_window(n);
  }
  std::ifstream in(s);
  if (!in) throw ConfigError("window: cannot open \"" + s + "\"");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("window: invalid JSON in \"" + s + "\": " + e.what());
  }
  return window_from_json(j);
}

std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

ojson lattice_json(const RationalLattice& l) {
  return {{"alpha", l.alpha()}, {"beta", l.beta()}, {"p", l.p()}, {"q", l.q()}, {"density", l.density()}};
}

ojson field_summary_json(const ZZField& f) {
  auto stats = [](const SummaryStats& s) { return ojson{{"min", s.min}, {"max", s.max}, {"mean", s.mean}}; };
  const FrameBoundEstimate b = frame_bounds(f);
  return {{"window", f.window_id},
          {"lattice", lattice_json(f.lattice)},
          {"nx", f.nx},
          {"nxi", f.nxi},
          {"eps", f.eps},
          {"tau_rank", f.tau_rank},
          {"det_abs", stats(f.det_abs)},
          {"sigma_min", stats(f.sigma_min)},
          {"sigma_max", stats(f.sigma_max)},
          {"deficient_fraction", f.deficient_fraction},
          {"frame_bounds", {{"lower", b.lower}, {"upper", b.upper}}}};
}

ojson witness_json(const ThetaWitness& w) {
  return {{"columns", w.columns.columns()},
          {"x", w.x},
          {"N", w.N},
          {"re", w.value.real()},
          {"im", w.value.imag()},
          {"error_bound", w.error_bound},
          {"rounding", w.rounding}};
}

void write_field_csv(std::ostream& os, const ZZField& f) {
  os << "x,xi,detA_abs,sigma_min,sigma_max\n";
  for (const auto& pt : f.points) {
    os << format_double(pt.x) << ',' << format_double(pt.xi) << ',' << format_double(pt.det_abs) << ','
       << format_double(pt.sigma_min) << ',' << format_double(pt.sigma_max) << '\n';
  }
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "size,residual\n";
  for (const auto& r : rows) os << r.size << ',' << format_double(r.residual) << '\n';
}

}  // namespace gaborzak
