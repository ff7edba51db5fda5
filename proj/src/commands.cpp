#include "gaborzak/commands.hpp"

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "gaborzak/errors.hpp"
#include "gaborzak/io.hpp"
#include "gaborzak/oracle.hpp"
#include "gaborzak/parallel.hpp"
#include "gaborzak/theta.hpp"
#include "gaborzak/zibulski.hpp"

#ifndef GABORZAK_VERSION
#define GABORZAK_VERSION "unknown"
#endif

namespace gaborzak {

const char* version() { return GABORZAK_VERSION; }

namespace {

struct Common {
  std::string window;
  double alpha = 1.0;
  std::int64_t p = 1;
  std::int64_t q = 1;
  double eps = kDefaultEps;
  unsigned threads = 0;
  std::string out;
  bool timing = false;
};

void add_common(CLI::App* app, Common& c, bool needs_lattice = true) {
  app->add_option("--window", c.window, "window JSON file or preset (gaussian, hermite:N, bump)")
      ->required();
  app->add_option("--alpha", c.alpha, "time step alpha")->capture_default_str();
  if (needs_lattice) {
    app->add_option("--p", c.p, "alpha beta = p/q")->capture_default_str();
    app->add_option("--q", c.q, "alpha beta = p/q")->capture_default_str();
  }
  app->add_option("--eps", c.eps, "truncation tolerance")->capture_default_str();
  app->add_option("--threads", c.threads, "worker threads, 0 = all cores")->capture_default_str();
  app->add_option("--out", c.out, "output file (default stdout)");
  app->add_flag("--timing", c.timing, "include wall-clock timings in the report");
}

std::pair<int, int> parse_grid(const std::string& s) {
  const auto x = s.find('x');
  int a = 0, b = 0;
  try {
    if (x == std::string::npos) throw std::invalid_argument(s);
    std::size_t used = 0;
    a = std::stoi(s.substr(0, x), &used);
    if (used != x) throw std::invalid_argument(s);
    b = std::stoi(s.substr(x + 1), &used);
    if (used != s.size() - x - 1) throw std::invalid_argument(s);
  } catch (const std::exception&) {
    throw ConfigError("--grid expects NxM, got \"" + s + "\"");
  }
  if (a < 2 || b < 2) throw ConfigError("--grid dimensions must be at least 2");
  return {a, b};
}

std::pair<std::int64_t, std::int64_t> parse_fraction(const std::string& s) {
  try {
    std::size_t used = 0;
    const auto slash = s.find('/');
    const std::int64_t p = std::stoll(s.substr(0, slash), &used);
    if (used != (slash == std::string::npos ? s.size() : slash)) throw std::invalid_argument(s);
    std::int64_t q = 1;
    if (slash != std::string::npos) {
      q = std::stoll(s.substr(slash + 1), &used);
      if (used != s.size() - slash - 1) throw std::invalid_argument(s);
    }
    return {p, q};
  } catch (const std::exception&) {
    throw ConfigError("density must be p/q, got \"" + s + "\"");
  }
}

// Writes to --out when given, else to the command's stream.
void emit(const Common& c, std::ostream& out, const std::string& text) {
  if (c.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw ConfigError("cannot write \"" + c.out + "\"");
  f << text;
}

void write_file(const std::string& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write \"" + path + "\"");
  body(f);
}

ojson header(const char* command) {
  return {{"tool", "gaborzak"}, {"version", version()}, {"command", command}};
}

class Stopwatch {
 public:
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double ms = std::chrono::duration<double, std::milli>(now - last_).count();
    last_ = now;
    return ms;
  }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

ojson verdict_entry(const std::string& answer, const std::string& tier, const std::string& reason) {
  return {{"answer", answer}, {"tier", tier}, {"reason", reason}};
}

TestFunction oracle_function(const std::string& name) {
  if (name == "narrow") return narrow_gaussian();
  if (name == "random") return random_bandlimited();
  if (name == "gap") {
    const WindowSpec b = bump_window({1.0, 2.0});
    return [b](double x) { return b(x); };
  }
  throw ConfigError("unknown test function \"" + name + "\" (narrow, random, gap)");
}

// ---- analyze ---------------------------------------------------------------

struct AnalyzeArgs {
  Common c;
  std::string grid = "64x64";
  double tau_rank = kDefaultRankTol;
  double tau_witness = 1e-6;
  long n_min = -8;
  long n_max = 8;
  int x_samples = 64;
  std::vector<int> sizes{1, 2, 4};
  std::string function = "narrow";
  std::string csv_prefix;
};

int cmd_analyze(const AnalyzeArgs& a, std::ostream& out, std::ostream& err) {
  const WindowSpec w = load_window(a.c.window);
  const RationalLattice lat(a.c.alpha, a.c.p, a.c.q);
  const auto [nx, nxi] = parse_grid(a.grid);
  const TestFunction f = oracle_function(a.function);

  ojson report = header("analyze");
  report["window"] = window_to_json(w);
  report["window_id"] = w.label();
  report["lattice"] = lattice_json(lat);
  report["grid"] = {{"coarse", {nx, nxi}}, {"fine", {2 * nx, 2 * nxi}}, {"eps", a.c.eps}, {"tau_rank", a.tau_rank}};

  ojson timing = ojson::object();
  Stopwatch clock;
  std::optional<Verdict> zz;
  std::optional<CertificateResult> cert;
  int code = kExitOk;
  try {
    const ZZField coarse = grid_scan(w, lat, nx, nxi, a.c.eps, a.tau_rank);
    const ZZField fine = grid_scan(w, lat, 2 * nx, 2 * nxi, a.c.eps, a.tau_rank);
    timing["grid_scan_ms"] = clock.lap();
    zz = verdict(coarse, fine);
    const VerdictEvidence& e = zz->evidence;
    report["zibulski"] = {{"coarse", field_summary_json(coarse)},
                          {"fine", field_summary_json(fine)},
                          {"lower_bound_ratio", e.lower_fine > 0.0 ? e.lower_coarse / e.lower_fine : 0.0},
                          {"near_zero_fraction", {e.near_zero_coarse, e.near_zero_fine}}};
    if (!a.csv_prefix.empty()) {
      write_file(a.csv_prefix + "_coarse.csv", [&](std::ostream& os) { write_field_csv(os, coarse); });
      write_file(a.csv_prefix + "_fine.csv", [&](std::ostream& os) { write_field_csv(os, fine); });
    }

    CertificateSearch search;
    search.n_min = a.n_min;
    search.n_max = a.n_max;
    search.x_samples = a.x_samples;
    search.tau = a.tau_witness;
    search.eps = a.c.eps;
    cert = completeness_certificate(w, lat, search);
    timing["certificate_ms"] = clock.lap();
    ojson th = {{"status", to_string(cert->status)},
                {"note", cert->note},
                {"candidates", cert->candidates},
                {"search", {{"n_min", a.n_min}, {"n_max", a.n_max}, {"x_samples", a.x_samples}, {"tau", a.tau_witness}}}};
    th["witness"] = cert->witness ? witness_json(*cert->witness) : ojson(nullptr);
    report["theta"] = th;

    const auto sweep = residual_sweep(f, w, lat, a.sizes);
    timing["oracle_ms"] = clock.lap();
    ojson rows = ojson::array();
    for (const auto& r : sweep) rows.push_back({{"size", r.size}, {"residual", r.residual}});
    report["oracle"] = {{"test_function", a.function}, {"sweep", rows}};
    if (!a.csv_prefix.empty()) {
      write_file(a.csv_prefix + "_sweep.csv", [&](std::ostream& os) { write_sweep_csv(os, sweep); });
    }
  } catch (const NumericalError& e) {
    report["error"] = {{"message", e.what()}, {"achieved_bound", e.achieved_bound()}};
    err << "gaborzak: numerical failure: " << e.what() << '\n';
    code = kExitNumerical;
  }

  ojson complete, frame;
  if (cert && cert->status == CertificateStatus::witness) {
    complete = verdict_entry("yes", "certified", cert->note);
  } else if (lat.undersampled()) {
    complete = verdict_entry("no", "numerical", "p > q: Q has rank at most q < p everywhere");
  } else if (zz && zz->complete != Answer::inconclusive) {
    complete = verdict_entry(to_string(zz->complete), "numerical", zz->complete_reason);
  } else {
    complete = verdict_entry("inconclusive", "inconclusive",
                             zz ? zz->complete_reason : "analysis did not complete");
  }
  if (zz && zz->frame != Answer::inconclusive) {
    frame = verdict_entry(to_string(zz->frame), "numerical", zz->frame_reason);
  } else {
    frame = verdict_entry("inconclusive", "inconclusive", zz ? zz->frame_reason : "analysis did not complete");
  }
  report["verdict"] = {{"complete", complete}, {"frame", frame}};
  report["status"] = code == kExitOk ? "ok" : "numerical_failure";
  if (a.c.timing) report["timing"] = timing;
  emit(a.c, out, report.dump(2) + "\n");
  return code;
}

// ---- scan ------------------------------------------------------------------

struct ScanArgs {
  Common c;
  std::vector<std::string> densities{"1/2", "2/3", "1/1", "3/2"};
  std::string grid = "32x32";
  double tau_rank = kDefaultRankTol;
};

int cmd_scan(const ScanArgs& a, std::ostream& out, std::ostream& err) {
  const WindowSpec w = load_window(a.c.window);
  const auto [nx, nxi] = parse_grid(a.grid);
  std::vector<std::pair<std::int64_t, std::int64_t>> fracs;
  for (const auto& d : a.densities) {
    fracs.push_back(parse_fraction(d));
    RationalLattice(a.c.alpha, fracs.back().first, fracs.back().second);
  }

  std::ostringstream csv;
  csv << "p,q,density,deficient_fraction,A_est,witness_found,status\n";
  for (const auto& [p0, q0] : fracs) {
    std::string p_s = std::to_string(p0), q_s = std::to_string(q0), density = "", deficient = "", a_est = "";
    std::string witness = "false", status;
    try {
      const RationalLattice lat(a.c.alpha, p0, q0);
      p_s = std::to_string(lat.p());
      q_s = std::to_string(lat.q());
      density = format_double(lat.density());
      const ZZField field = grid_scan(w, lat, nx, nxi, a.c.eps, a.tau_rank);
      deficient = format_double(field.deficient_fraction);
      a_est = format_double(frame_bounds(field).lower);
      const CertificateResult cert = completeness_certificate(w, lat, {.eps = a.c.eps});
      witness = cert.status == CertificateStatus::witness ? "true" : "false";
      status = to_string(cert.status);
    } catch (const NumericalError& e) {
      status = "numerical_failure";
      err << "gaborzak: scan row " << p0 << '/' << q0 << ": " << e.what() << '\n';
    }
    csv << p_s << ',' << q_s << ',' << density << ',' << deficient << ',' << a_est << ',' << witness << ','
        << status << '\n';
  }
  emit(a.c, out, csv.str());
  return kExitOk;
}

// ---- theta -----------------------------------------------------------------

struct ThetaArgs {
  Common c;
  std::vector<int> columns;
  double x = 0.0;
  long n = 0;
  bool search = false;
  long n_min = -8;
  long n_max = 8;
  int x_samples = 64;
  double tau = 1e-6;
};

int cmd_theta(const ThetaArgs& a, std::ostream& out, std::ostream&) {
  const WindowSpec w = load_window(a.c.window);
  const RationalLattice lat(a.c.alpha, a.c.p, a.c.q);
  ojson report = header("theta");
  report["window"] = window_to_json(w);
  report["lattice"] = lattice_json(lat);
  if (a.search) {
    CertificateSearch s;
    s.n_min = a.n_min;
    s.n_max = a.n_max;
    s.x_samples = a.x_samples;
    s.tau = a.tau;
    s.eps = a.c.eps;
    const CertificateResult r = completeness_certificate(w, lat, s);
    report["status"] = to_string(r.status);
    report["note"] = r.note;
    report["candidates"] = r.candidates;
    report["witness"] = r.witness ? witness_json(*r.witness) : ojson(nullptr);
  } else {
    std::vector<int> cols = a.columns;
    if (cols.empty()) {
      for (int j = 0; j < lat.p(); ++j) cols.push_back(j);
    }
    const ColumnSet cs(cols, lat.q());
    const ThetaValue v = theta(w, lat, cs, a.x, a.n, a.c.eps);
    report["value"] = {{"columns", cs.columns()},
                       {"x", a.x},
                       {"N", a.n},
                       {"re", v.value.real()},
                       {"im", v.value.imag()},
                       {"error_bound", v.error_bound},
                       {"rounding", v.rounding},
                       {"radius", v.radius}};
  }
  emit(a.c, out, report.dump(2) + "\n");
  return kExitOk;
}

// ---- reconstruct -----------------------------------------------------------

struct ReconstructArgs {
  Common c;
  std::string signal = "window";
  double half_width = 8.0;
  int mx = 64;
  double pinv_tol = 1e-8;
  std::string samples_csv;
};

int cmd_reconstruct(const ReconstructArgs& a, std::ostream& out, std::ostream& err) {
  const WindowSpec w = load_window(a.c.window);
  const RationalLattice lat(a.c.alpha, a.c.p, a.c.q);
  if (a.mx < 1) throw ConfigError("--mx must be positive");
  TestFunction f;
  if (a.signal == "window") {
    f = [w](double x) { return w(x); };
  } else if (a.signal == "zero") {
    f = [](double) { return cplx{}; };
  } else if (a.signal == "gaussian") {
    f = [](double x) { return cplx{std::exp(-kPi * x * x), 0.0}; };
  } else {
    f = oracle_function(a.signal);
  }
  const double step = lat.alpha() / (lat.p() * a.mx);
  const SampledSignal s = sample_signal(f, step, a.half_width);
  ReconstructOptions opt;
  opt.eps = a.c.eps;
  opt.pinv_tol = a.pinv_tol;
  const ReconstructResult r = reconstruct(s, w, lat, opt);

  ojson report = header("reconstruct");
  report["window"] = window_to_json(w);
  report["lattice"] = lattice_json(lat);
  report["signal"] = {{"name", a.signal}, {"half_width", a.half_width}, {"step", step}};
  ojson cells = ojson::array();
  for (const auto& [x, xi] : r.cutoff_cells) cells.push_back({x, xi});
  report["result"] = {{"relative_error", r.relative_error},
                      {"cutoff_fraction", r.cutoff_fraction},
                      {"unstable", r.unstable},
                      {"cutoff_cells", cells},
                      {"time_shifts", r.time_shifts},
                      {"frequency_radius", r.frequency_radius},
                      {"x_cells", r.x_cells},
                      {"xi_cells", r.xi_cells}};
  if (r.unstable) {
    report["warning"] = "reconstruction unstable";
    err << "gaborzak: reconstruction unstable\n";
  }
  if (!a.samples_csv.empty()) {
    write_file(a.samples_csv, [&](std::ostream& os) {
      os << "t,re,im,re_rec,im_rec\n";
      for (std::size_t i = 0; i < s.values.size(); ++i) {
        os << format_double(s.time(i)) << ',' << format_double(s.values[i].real()) << ','
           << format_double(s.values[i].imag()) << ',' << format_double(r.signal.values[i].real()) << ','
           << format_double(r.signal.values[i].imag()) << '\n';
      }
    });
  }
  emit(a.c, out, report.dump(2) + "\n");
  return kExitOk;
}

// ---- oracle ----------------------------------------------------------------

struct OracleArgs {
  Common c;
  std::vector<int> sizes{1, 2, 4};
  std::string function = "narrow";
  std::string method = "ridge";
  std::optional<double> ridge;
};

int cmd_oracle(const OracleArgs& a, std::ostream& out, std::ostream&) {
  const WindowSpec w = load_window(a.c.window);
  const RationalLattice lat(a.c.alpha, a.c.p, a.c.q);
  SolveOptions opt;
  if (a.method == "pinv") {
    opt.method = SolveMethod::pinv;
  } else if (a.method != "ridge") {
    throw ConfigError("--method must be ridge or pinv");
  }
  opt.ridge = a.ridge;
  std::ostringstream csv;
  write_sweep_csv(csv, residual_sweep(oracle_function(a.function), w, lat, a.sizes, opt));
  emit(a.c, out, csv.str());
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Completeness and frame analysis of Gabor systems over rational lattices", "gaborzak"};
  app.set_version_flag("--version", std::string(version()));
  app.require_subcommand(1);

  AnalyzeArgs an;
  auto* analyze = app.add_subcommand("analyze", "full report: grid scans, verdicts, certificate, oracle");
  add_common(analyze, an.c);
  analyze->add_option("--grid", an.grid, "coarse grid NxM; a 2N x 2M refinement is also run")->capture_default_str();
  analyze->add_option("--tau", an.tau_rank, "relative rank tolerance")->capture_default_str();
  analyze->add_option("--witness-tau", an.tau_witness, "witness threshold")->capture_default_str();
  analyze->add_option("--n-min", an.n_min, "smallest N searched")->capture_default_str();
  analyze->add_option("--n-max", an.n_max, "largest N searched")->capture_default_str();
  analyze->add_option("--x-samples", an.x_samples, "x samples of [0, alpha) searched")->capture_default_str();
  analyze->add_option("--sizes", an.sizes, "oracle section sizes")->delimiter(',')->capture_default_str();
  analyze->add_option("--function", an.function, "oracle test function: narrow, random, gap")->capture_default_str();
  analyze->add_option("--csv-prefix", an.csv_prefix, "write <prefix>_coarse.csv, _fine.csv, _sweep.csv");

  ScanArgs sc;
  auto* scan = app.add_subcommand("scan", "verdict table over a list of densities p/q");
  add_common(scan, sc.c, false);
  scan->add_option("--densities", sc.densities, "comma separated p/q list")->delimiter(',')->capture_default_str();
  scan->add_option("--grid", sc.grid)->capture_default_str();
  scan->add_option("--tau", sc.tau_rank, "relative rank tolerance")->capture_default_str();

  ThetaArgs th;
  auto* thc = app.add_subcommand("theta", "one Theta coefficient, or a witness search with --search");
  add_common(thc, th.c);
  thc->add_option("--columns", th.columns, "column set, default 0..p-1")->delimiter(',');
  thc->add_option("--x", th.x)->capture_default_str();
  thc->add_option("--N", th.n)->capture_default_str();
  thc->add_flag("--search", th.search, "run the completeness certificate search");
  thc->add_option("--n-min", th.n_min, "smallest N searched")->capture_default_str();
  thc->add_option("--n-max", th.n_max, "largest N searched")->capture_default_str();
  thc->add_option("--x-samples", th.x_samples, "x samples of [0, alpha) searched")->capture_default_str();
  thc->add_option("--tau", th.tau, "witness threshold")->capture_default_str();

  ReconstructArgs rc;
  auto* rec = app.add_subcommand("reconstruct", "reconstruct a signal from S f in the Zak domain");
  add_common(rec, rc.c);
  rec->add_option("--signal", rc.signal, "window, gaussian, narrow, random, gap, zero")->capture_default_str();
  rec->add_option("--half-width", rc.half_width)->capture_default_str();
  rec->add_option("--mx", rc.mx, "samples per alpha/p")->capture_default_str();
  rec->add_option("--pinv-tol", rc.pinv_tol)->capture_default_str();
  rec->add_option("--samples-csv", rc.samples_csv, "write t,re,im,re_rec,im_rec");

  OracleArgs orc;
  auto* ora = app.add_subcommand("oracle", "least-squares residual sweep over Gabor sections");
  add_common(ora, orc.c);
  ora->add_option("--sizes", orc.sizes)->delimiter(',')->capture_default_str();
  ora->add_option("--function", orc.function, "narrow, random, gap")->capture_default_str();
  ora->add_option("--method", orc.method, "ridge or pinv")->capture_default_str();
  ora->add_option("--ridge", orc.ridge, "ridge parameter (default 1e-10 trace/dim)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc_parse = app.exit(e, out, err);
    return rc_parse == 0 ? kExitOk : kExitConfig;
  }

  try {
    auto run = [&](Common& c, auto&& body) {
      set_thread_limit(c.threads);
      return body();
    };
    if (analyze->parsed()) return run(an.c, [&] { return cmd_analyze(an, out, err); });
    if (scan->parsed()) return run(sc.c, [&] { return cmd_scan(sc, out, err); });
    if (thc->parsed()) return run(th.c, [&] { return cmd_theta(th, out, err); });
    if (rec->parsed()) return run(rc.c, [&] { return cmd_reconstruct(rc, out, err); });
    if (ora->parsed()) return run(orc.c, [&] { return cmd_oracle(orc, out, err); });
  } catch (const ConfigError& e) {
    err << "gaborzak: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericalError& e) {
    err << "gaborzak: numerical failure: " << e.what() << " (achieved bound " << e.achieved_bound() << ")\n";
    return kExitNumerical;
  }
  return kExitConfig;
}

}  // namespace gaborzak
