#include "rieszlab/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rieszlab/checks.hpp"
#include "rieszlab/core.hpp"
#include "rieszlab/energy.hpp"
#include "rieszlab/generators.hpp"
#include "rieszlab/io.hpp"
#include "rieszlab/parallel.hpp"
#include "rieszlab/rigidity.hpp"
#include "rieszlab/sampler.hpp"
#include "rieszlab/stats.hpp"
#include "rieszlab/transport.hpp"
#include "rieszlab/version.hpp"

namespace rieszlab {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

Window parse_window(const std::string& text) {
  auto comma = text.find(',');
  if (comma == std::string::npos)
    throw CLI::ValidationError("window", "expected \"left,right\", got \"" + text + "\"");
  try {
    double l = std::stod(text.substr(0, comma));
    double r = std::stod(text.substr(comma + 1));
    return Window(l, r);
  } catch (const std::invalid_argument&) {
    throw CLI::ValidationError("window", "expected \"left,right\", got \"" + text + "\"");
  }
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(std::stod(tok));
  }
  return out;
}

// Manifest bookkeeping shared by every command.
struct OutputContext {
  fs::path dir;
  RunManifest manifest;

  OutputContext(const std::string& out, const std::string& command,
                const std::vector<std::string>& argv, std::uint64_t seed) {
    dir = out;
    fs::create_directories(dir);
    manifest.command = command;
    manifest.version = RIESZLAB_VERSION;
    manifest.argv = argv;
    manifest.seed = seed;
    manifest.threads = effective_threads();
    manifest.started = iso_timestamp_now();
  }

  fs::path file(const std::string& name) {
    manifest.outputs.push_back(name);
    return dir / name;
  }

  void finish() {
    manifest.finished = iso_timestamp_now();
    write_manifest(dir / "manifest.json", manifest);
  }
};

void write_json_file(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << j.dump(2) << '\n';
}

std::vector<Configuration> read_batch(const std::string& path) {
  fs::path p(path);
  if (!fs::exists(p)) throw std::runtime_error("no such input file: " + path);
  if (p.extension() == ".csv") return {read_config_csv(p)};
  return read_configs_jsonl(p);
}

json sampler_report_json(const SamplerReport& r) {
  return json{{"acceptance_rate", r.acceptance_rate}, {"iact", r.iact},
              {"ess", r.ess},                         {"sigma_final", r.sigma_final},
              {"steps", r.steps},                     {"seed", r.seed}};
}

// ---------------------------------------------------------------- generate

struct GenerateOpts {
  std::string process;
  std::string window = "0,100";
  long samples = 10;
  std::uint64_t seed = 1;
  std::string out;
  double intensity = 1.0;
  std::string law = "gaussian";
  double scale = 0.5;
  double margin = -1.0;
  std::string mass_law = "zipf2";
  int nmax = 100;
  double q = 0.5;
  int tile_n = 32;
  double beta = 1.0;
};

PerturbationLaw make_law(const std::string& name, double scale) {
  if (name == "gaussian") return PerturbationLaw::gaussian(scale);
  if (name == "uniform") return PerturbationLaw::uniform(scale);
  if (name == "laplace") return PerturbationLaw::laplace(scale);
  if (name == "constant") return PerturbationLaw::constant(scale);
  throw CLI::ValidationError("law", "unknown perturbation law: " + name);
}

MassLaw make_mass_law(const std::string& name, int nmax, double q) {
  if (name == "zipf2") return MassLaw::zipf2(nmax);
  if (name == "geometric") return MassLaw::geometric(q, nmax);
  if (name == "uniform") return MassLaw::uniform_range(1, nmax);
  if (name == "fixed") return MassLaw::fixed(nmax);
  throw CLI::ValidationError("a", "unknown mass law: " + name);
}

void run_generate(const GenerateOpts& o, const std::vector<std::string>& argv) {
  Window w = parse_window(o.window);
  OutputContext ctx(o.out, "generate", argv, o.seed);
  ctx.manifest.parameters = {{"process", o.process}, {"window", o.window},
                             {"samples", o.samples}, {"intensity", o.intensity},
                             {"law", o.law},         {"scale", o.scale},
                             {"margin", o.margin},   {"mass_law", o.mass_law},
                             {"nmax", o.nmax},       {"q", o.q},
                             {"tile_n", o.tile_n},   {"beta", o.beta}};

  RandomStream root(o.seed);
  std::vector<Configuration> cfgs;
  cfgs.reserve(static_cast<std::size_t>(o.samples));
  for (long i = 0; i < o.samples; ++i) {
    RandomStream sub = root.substream(static_cast<std::uint64_t>(i));
    if (o.process == "poisson") {
      cfgs.push_back(sample_poisson(w, o.intensity, sub));
    } else if (o.process == "lattice") {
      cfgs.push_back(sample_stationarized_lattice(w, sub));
    } else if (o.process == "perturbed") {
      cfgs.push_back(
          sample_perturbed_lattice(w, make_law(o.law, o.scale), sub, o.margin));
    } else if (o.process == "counterexample") {
      cfgs.push_back(sample_counterexample(w, make_mass_law(o.mass_law, o.nmax, o.q), sub));
    } else if (o.process == "tiles") {
      ModelParams tile(-1.0, o.beta, o.tile_n);
      auto sampler = [tile](RandomStream& rs) { return exact_coulomb_sample(tile, rs); };
      cfgs.push_back(stationarize(sampler, static_cast<double>(o.tile_n), w, sub));
    } else {
      throw CLI::ValidationError(
          "process", "unknown process: " + o.process +
                         " (known: poisson, lattice, perturbed, counterexample, tiles)");
    }
  }
  write_configs_jsonl(ctx.file("configs.jsonl"), cfgs);
  ctx.finish();
}

// ------------------------------------------------------------ sample-riesz

struct SampleOpts {
  double s = -1.0;
  double beta = 1.0;
  long n = 16;
  std::string method = "mcmc";
  long samples = 1000;
  long thin = 100;
  long burn = 10000;
  double sigma = -1.0;
  double p_global = 0.1;
  int chains = 1;
  std::uint64_t seed = 1;
  std::string out;
};

void run_sample_riesz(const SampleOpts& o, const std::vector<std::string>& argv) {
  if (o.method != "mcmc" && o.method != "exact")
    throw CLI::ValidationError("method", "must be mcmc or exact");
  if (o.method == "exact" && o.s != -1.0)
    throw CLI::ValidationError(
        "method", "exact sampling is only available at s = -1, where the Gibbs "
                  "density factors over ordered gaussian displacements; use "
                  "--method mcmc for s = " + std::to_string(o.s));

  ModelParams params(o.s, o.beta, o.n);
  OutputContext ctx(o.out, "sample-riesz", argv, o.seed);
  ctx.manifest.parameters = {{"s", o.s},           {"beta", o.beta},
                             {"n", o.n},           {"method", o.method},
                             {"samples", o.samples}, {"thin", o.thin},
                             {"burn", o.burn},     {"sigma", o.sigma},
                             {"p_global", o.p_global}, {"chains", o.chains}};

  RandomStream root(o.seed);
  SampleBatch batch;
  json report;

  bool fell_back = false;
  if (o.method == "exact") {
    batch.seed = o.seed;
    batch.provenance = "exact rejection, s=-1";
    long total_attempts = 0;
    try {
      RandomStream rs = root.substream(0);
      for (long i = 0; i < o.samples; ++i) {
        long att = 0;
        batch.configs.push_back(exact_coulomb_sample(params, rs, 1000000, &att));
        batch.energies.push_back(hamiltonian_baxter(batch.configs.back(), params));
        total_attempts += att;
      }
      report = {{"method", "exact"},
                {"samples", o.samples},
                {"attempts", total_attempts},
                {"acceptance_rate",
                 static_cast<double>(o.samples) / std::max<long>(1, total_attempts)},
                {"seed", o.seed}};
    } catch (const std::runtime_error& e) {
      std::cerr << "warning: " << e.what() << "\n"
                << "warning: falling back to mcmc sampling\n";
      fell_back = true;
      batch.configs.clear();
      batch.energies.clear();
    }
  }

  if (o.method == "mcmc" || fell_back) {
    McmcOptions opt;
    opt.thin = o.thin;
    opt.burn_in = o.burn;
    opt.sigma_prop = o.sigma;
    opt.p_global = o.p_global;
    if (o.chains <= 1) {
      opt.steps = o.thin * o.samples;
      SamplerReport rep;
      RandomStream rs = root.substream(1);
      batch = mcmc_sample(params, opt, rs, &rep);
      report = sampler_report_json(rep);
      report["method"] = "mcmc";
    } else {
      long per = (o.samples + o.chains - 1) / o.chains;
      opt.steps = o.thin * per;
      std::vector<SamplerReport> reps;
      RandomStream rs = root.substream(1);
      batch = mcmc_sample_chains(params, opt, o.chains, rs, &reps);
      json arr = json::array();
      for (const auto& rep : reps) arr.push_back(sampler_report_json(rep));
      report = {{"method", "mcmc"}, {"chains", arr}};
    }
    if (fell_back) report["fallback_from"] = "exact";
  }

  write_configs_jsonl(ctx.file("batch.jsonl"), batch.configs);
  {
    CsvWriter csv(ctx.file("energies.csv"), {"index", "energy"});
    for (std::size_t i = 0; i < batch.energies.size(); ++i)
      csv.row({static_cast<double>(i), batch.energies[i]});
  }
  write_json_file(ctx.file("report.json"), report);
  ctx.finish();
}

// ----------------------------------------------------------------- energy

struct EnergyOpts {
  std::string in;
  double s = -1.0;
  std::string evaluator = "all";
  double abs_tol = 1e-8;
  bool audit = false;
  std::uint64_t seed = 0;
  std::string out;
};

void run_energy(const EnergyOpts& o, const std::vector<std::string>& argv) {
  if (o.evaluator != "all" && o.evaluator != "pairwise" && o.evaluator != "baxter" &&
      o.evaluator != "fourier")
    throw CLI::ValidationError("evaluator", "must be pairwise, baxter, fourier or all");
  if (o.evaluator == "baxter" && o.s != -1.0)
    throw CLI::ValidationError("evaluator", "the displacement form needs s = -1");

  std::vector<Configuration> cfgs = read_batch(o.in);
  OutputContext ctx(o.out, "energy", argv, o.seed);
  ctx.manifest.parameters = {{"in", o.in},
                             {"s", o.s},
                             {"evaluator", o.evaluator},
                             {"abs_tol", o.abs_tol},
                             {"audit", o.audit}};

  QuadratureSettings qs;
  qs.abs_tol = o.abs_tol;

  CsvWriter csv(ctx.file("energy.csv"),
                {"index", "evaluator", "value", "err", "panels"});
  json rows = json::array();
  std::vector<EnergyAudit> audits;
  for (std::size_t i = 0; i < cfgs.size(); ++i) {
    Configuration cfg = cfgs[i];
    if (!cfg.window())
      throw std::runtime_error("configuration " + std::to_string(i) +
                               " has no window; the energy needs the box");
    // The Hamiltonian lives on the centered box; recenter what came in.
    cfg = translate(cfg, -cfg.window()->center());
    double mass = cfg.total_mass();
    auto n = static_cast<std::int64_t>(std::llround(mass));
    ModelParams params(o.s, 1.0, n);

    auto emit = [&](const std::string& name, double value, double err, long panels,
                    double elapsed) {
      csv.row_mixed({std::to_string(i), name, format_double(value),
                     format_double(err), std::to_string(panels)});
      rows.push_back({{"index", i},
                      {"evaluator", name},
                      {"value", value},
                      {"err", err},
                      {"panels", panels},
                      {"elapsed_s", elapsed}});
    };
    auto timed = [&](auto&& f) {
      auto t0 = std::chrono::steady_clock::now();
      f();
      return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
    };

    if (o.evaluator == "all" || o.evaluator == "pairwise") {
      double v = 0.0;
      double el = timed([&] { v = hamiltonian_pairwise(cfg, params); });
      emit("pairwise", v, 0.0, 0, el);
    }
    if ((o.evaluator == "all" && o.s == -1.0) || o.evaluator == "baxter") {
      double v = 0.0;
      double el = timed([&] { v = hamiltonian_baxter(cfg, params); });
      emit("baxter", v, 0.0, 0, el);
    }
    if (o.evaluator == "all" || o.evaluator == "fourier") {
      EnergyValue v;
      double el = timed([&] { v = hamiltonian_fourier(cfg, params, qs); });
      emit("fourier", v.value, v.err, v.panels, el);
    }
    if (o.audit) audits.push_back(energy_inequality_audit(cfg, params, qs));
  }

  json summary = {{"settings", {{"s", o.s}, {"abs_tol", o.abs_tol}}},
                  {"evaluations", rows}};
  if (o.audit) {
    CsvWriter acsv(ctx.file("audit.csv"),
                   {"index", "w2_leb", "w2_lattice", "h_coulomb", "lf2", "hf2",
                    "lf_s", "hf_exp", "h_s", "h_exp", "h_gauss", "sum_nj2",
                    "quad_err", "all_hold"});
    json ja = json::array();
    bool all = true;
    for (std::size_t i = 0; i < audits.size(); ++i) {
      const EnergyAudit& a = audits[i];
      acsv.row({static_cast<double>(i), a.w2_leb, a.w2_lattice, a.h_coulomb, a.lf2,
                a.hf2, a.lf_s, a.hf_exp, a.h_s, a.h_exp, a.h_gauss, a.sum_nj2,
                a.quad_err, a.all_hold ? 1.0 : 0.0});
      json jrows = json::array();
      for (const auto& r : a.rows)
        jrows.push_back({{"name", r.name},
                         {"lhs", r.lhs},
                         {"rhs", r.rhs},
                         {"slack", r.slack},
                         {"holds", r.holds}});
      ja.push_back({{"index", i}, {"all_hold", a.all_hold}, {"rows", jrows}});
      all = all && a.all_hold;
    }
    summary["audit"] = {{"all_hold", all}, {"configs", ja}};
    if (audits.size() >= 3) {
      ModelParams params(o.s, 1.0, 1);
      AuditFit fit = audit_fit(audits, params);
      summary["audit"]["fit"] = {{"a_w2_vs_hs", fit.a_w2_vs_hs},
                                 {"b_w2_vs_n", fit.b_w2_vs_n},
                                 {"a_gauss_vs_nj2", fit.a_gauss_vs_nj2},
                                 {"b_gauss_vs_n", fit.b_gauss_vs_n}};
    }
  }
  write_json_file(ctx.file("energy.json"), summary);
  ctx.finish();
}

// --------------------------------------------------------------- transport

struct TransportOpts {
  std::string in;
  double p = 2.0;
  std::string target = "lebesgue";
  std::string lengths;
  std::uint64_t seed = 0;
  std::string out;
};

TransportTarget parse_target(const std::string& name) {
  if (name == "lebesgue") return TransportTarget::lebesgue;
  if (name == "lattice") return TransportTarget::lattice;
  throw CLI::ValidationError("target", "must be lebesgue or lattice");
}

void run_transport(const TransportOpts& o, const std::vector<std::string>& argv) {
  TransportTarget target = parse_target(o.target);
  std::vector<Configuration> cfgs = read_batch(o.in);
  OutputContext ctx(o.out, "transport", argv, o.seed);
  ctx.manifest.parameters = {
      {"in", o.in}, {"p", o.p}, {"target", o.target}, {"lengths", o.lengths}};

  CsvWriter csv(ctx.file("transport.csv"),
                {"index", "mass", "window_length", "cost", "cost_per_length"});
  std::vector<double> per;
  for (std::size_t i = 0; i < cfgs.size(); ++i) {
    const Configuration& cfg = cfgs[i];
    if (!cfg.window())
      throw std::runtime_error("configuration " + std::to_string(i) +
                               " has no window; transport needs one");
    double cost = windowed_cost(cfg, *cfg.window(), target, o.p);
    double len = cfg.window()->length();
    csv.row({static_cast<double>(i), static_cast<double>(cfg.total_mass()), len,
             cost, cost / len});
    per.push_back(cost / len);
  }
  SampleStats st = sample_stats(per);
  json summary = {{"p", o.p},
                  {"target", o.target},
                  {"mean_cost_per_length", st.mean},
                  {"se", st.se},
                  {"samples", st.n}};

  if (!o.lengths.empty()) {
    std::vector<double> ells = parse_list(o.lengths);
    CsvWriter curve(ctx.file("transport_curve.csv"),
                    {"length", "mean_cost_per_length", "se", "samples"});
    SvgCurve sc;
    sc.label = "cost per unit length";
    std::vector<double> means;
    for (double ell : ells) {
      std::vector<double> vals;
      for (const auto& cfg : cfgs) {
        double c = cfg.window()->center();
        Window w(c - 0.5 * ell, c + 0.5 * ell);
        vals.push_back(windowed_cost(cfg, w, target, o.p, PhaseAnchor::free) / ell);
      }
      SampleStats ls = sample_stats(vals);
      curve.row({ell, ls.mean, ls.se, static_cast<double>(ls.n)});
      sc.xs.push_back(ell);
      sc.ys.push_back(ls.mean);
      means.push_back(ls.mean);
    }
    write_svg_plot(ctx.file("transport_curve.svg"), {sc}, "window length",
                   "cost per unit length", "windowed transport cost");
    if (means.size() >= 3) {
      MannKendall mk = mann_kendall(means);
      summary["curve_trend_p_increasing"] = mk.p_increasing;
      summary["curve_bounded"] = !mk.increasing_at(0.05);
    }
  }
  write_json_file(ctx.file("transport.json"), summary);
  ctx.finish();
}

// ---------------------------------------------------------------- diagnose

struct DiagnoseOpts {
  std::string in;
  std::string checks = "variance,discrepancy,shift,rigidity,transport";
  std::string lengths;
  long m = 0;
  std::string domain;
  double origin = std::numeric_limits<double>::quiet_NaN();
  double alpha = 0.01;
  double p = 2.0;
  std::string target = "lebesgue";
  std::uint64_t seed = 0;
  std::string out;
};

void run_diagnose(const DiagnoseOpts& o, const std::vector<std::string>& argv) {
  std::vector<Configuration> cfgs = read_batch(o.in);
  if (cfgs.empty()) throw std::runtime_error("empty batch: " + o.in);
  for (std::size_t i = 0; i < cfgs.size(); ++i)
    if (!cfgs[i].window())
      throw std::runtime_error("configuration " + std::to_string(i) +
                               " has no window; diagnostics need one");

  OutputContext ctx(o.out, "diagnose", argv, o.seed);
  ctx.manifest.parameters = {{"in", o.in},         {"checks", o.checks},
                             {"lengths", o.lengths}, {"m", o.m},
                             {"domain", o.domain}, {"alpha", o.alpha},
                             {"p", o.p},           {"target", o.target}};

  double min_len = std::numeric_limits<double>::infinity();
  for (const auto& c : cfgs) min_len = std::min(min_len, c.window()->length());

  std::vector<double> ells;
  if (!o.lengths.empty()) {
    ells = parse_list(o.lengths);
  } else {
    for (int k = 1; k <= 8; ++k) ells.push_back(min_len * 0.05 * k);
  }

  std::set<std::string> want;
  {
    std::stringstream ss(o.checks);
    std::string tok;
    while (std::getline(ss, tok, ',')) if (!tok.empty()) want.insert(tok);
  }
  for (const auto& name : want)
    if (name != "variance" && name != "discrepancy" && name != "shift" &&
        name != "rigidity" && name != "transport")
      throw CLI::ValidationError("checks", "unknown diagnostic: " + name);

  json summary;
  summary["samples"] = cfgs.size();

  auto curve_csv_svg = [&](const std::string& base, const std::vector<CurvePoint>& pts,
                           const std::string& ylab) {
    CsvWriter csv(ctx.file(base + ".csv"), {"length", "value", "stderr", "samples"});
    SvgCurve sc;
    sc.label = ylab;
    for (const auto& pt : pts) {
      csv.row({pt.length, pt.value, pt.stderr_, static_cast<double>(pt.samples)});
      sc.xs.push_back(pt.length);
      sc.ys.push_back(pt.value);
    }
    write_svg_plot(ctx.file(base + ".svg"), {sc}, "interval length", ylab, base);
  };

  if (want.count("variance")) {
    std::vector<CurvePoint> pts = variance_curve(cfgs, ells);
    curve_csv_svg("variance", pts, "count variance");
    std::vector<double> vals;
    for (const auto& pt : pts) vals.push_back(pt.value);
    MannKendall mk = mann_kendall(vals);
    bool flat = !mk.increasing_at(o.alpha);
    summary["variance"] = {{"trend_p_increasing", mk.p_increasing},
                           {"bounded", flat},
                           {"verdict", flat ? "hyperuniform-compatible"
                                            : "not hyperuniform"}};
  }

  if (want.count("discrepancy")) {
    std::vector<CurvePoint> pts = discrepancy_stats(cfgs, ells);
    curve_csv_svg("discrepancy", pts, "mean absolute discrepancy");
    double mx = 0.0;
    for (const auto& pt : pts) mx = std::max(mx, pt.value);
    summary["discrepancy"] = {{"max", mx}};
  }

  if (want.count("shift")) {
    double origin = std::isnan(o.origin) ? cfgs.front().window()->center() : o.origin;
    long m = o.m;
    if (m <= 0) {
      long avail = std::numeric_limits<long>::max();
      for (const auto& c : cfgs) {
        ExteriorView view(c, Window(origin - 1e-12, origin + 1e-12));
        avail = std::min(avail, static_cast<long>(view.right_ascending().size()));
      }
      m = std::max<long>(1, avail / 2);
    }
    CsvWriter csv(ctx.file("shift.csv"),
                  {"index", "phi", "u", "lr_gap", "depth_residual"});
    std::vector<double> us;
    for (std::size_t i = 0; i < cfgs.size(); ++i) {
      ShiftReport r = shift_estimator(cfgs[i], origin, m);
      csv.row({static_cast<double>(i), r.phi, r.u, r.lr_gap, r.depth_residual});
      us.push_back(r.u);
    }
    summary["shift"] = {{"m", m}, {"origin", origin}};
    if (us.size() >= 50) {
      UniformityReport ur = uniformity_test(us);
      summary["shift"]["uniform"] = ur.pass(o.alpha);
      summary["shift"]["ks_p"] = ur.ks_p;
      summary["shift"]["fourier_p"] = ur.fourier_p;
    } else {
      summary["shift"]["uniform"] = nullptr;
      summary["shift"]["note"] = "need at least 50 samples for the uniformity test";
    }
  }

  if (want.count("rigidity")) {
    Window domain = o.domain.empty()
                        ? Window(cfgs.front().window()->center() - 5.0,
                                 cfgs.front().window()->center() + 5.0)
                        : parse_window(o.domain);
    long m = o.m;
    if (m <= 0) {
      long avail = std::numeric_limits<long>::max();
      for (const auto& c : cfgs) {
        ExteriorView view(c, domain);
        avail = std::min({avail, static_cast<long>(view.right_ascending().size()),
                          static_cast<long>(view.left_descending().size())});
      }
      m = std::max<long>(1, avail / 2);
    }
    CsvWriter csv(ctx.file("rigidity.csv"),
                  {"index", "predicted", "actual", "agree", "s_right", "s_left",
                   "tie_flag"});
    long agree = 0;
    for (std::size_t i = 0; i < cfgs.size(); ++i) {
      RigidityReport r = exterior_count_predictor(cfgs[i], domain, m);
      csv.row({static_cast<double>(i), static_cast<double>(r.predicted),
               static_cast<double>(r.actual), r.agree() ? 1.0 : 0.0, r.s_right,
               r.s_left, r.tie_flag ? 1.0 : 0.0});
      if (r.agree()) ++agree;
    }
    double rate = static_cast<double>(agree) / static_cast<double>(cfgs.size());
    summary["rigidity"] = {{"m", m},
                           {"domain", {domain.left, domain.right}},
                           {"agreement_rate", rate},
                           {"pass", rate >= 0.9}};
  }

  if (want.count("transport")) {
    TransportTarget target = parse_target(o.target);
    CsvWriter csv(ctx.file("transport_curve.csv"),
                  {"length", "mean_cost_per_length", "se", "samples"});
    SvgCurve sc;
    sc.label = "cost per unit length";
    std::vector<double> means;
    for (double ell : ells) {
      std::vector<double> vals;
      for (const auto& cfg : cfgs) {
        double c = cfg.window()->center();
        Window w(c - 0.5 * ell, c + 0.5 * ell);
        vals.push_back(windowed_cost(cfg, w, target, o.p, PhaseAnchor::free) / ell);
      }
      SampleStats st = sample_stats(vals);
      csv.row({ell, st.mean, st.se, static_cast<double>(st.n)});
      sc.xs.push_back(ell);
      sc.ys.push_back(st.mean);
      means.push_back(st.mean);
    }
    write_svg_plot(ctx.file("transport_curve.svg"), {sc}, "window length",
                   "cost per unit length", "windowed transport cost");
    MannKendall mk = mann_kendall(means);
    summary["transport"] = {{"p", o.p},
                            {"target", o.target},
                            {"plateau_level", means.empty() ? 0.0 : means.back()},
                            {"trend_p_increasing", mk.p_increasing},
                            {"bounded", !mk.increasing_at(o.alpha)}};
  }

  write_json_file(ctx.file("summary.json"), summary);
  ctx.finish();
}

// -------------------------------------------------------------------- logz

struct LogzOpts {
  double s = -1.0;
  double beta = 1.0;
  long n = 8;
  int grid_points = 21;
  long samples = 4000;
  std::uint64_t seed = 1;
  std::string out;
};

void run_logz(const LogzOpts& o, const std::vector<std::string>& argv) {
  ModelParams params(o.s, o.beta, o.n);
  OutputContext ctx(o.out, "logz", argv, o.seed);
  ctx.manifest.parameters = {{"s", o.s},
                             {"beta", o.beta},
                             {"n", o.n},
                             {"grid_points", o.grid_points},
                             {"samples", o.samples}};

  RandomStream rs(o.seed);
  auto grid = uniform_beta_grid(o.beta, o.grid_points);
  LogZEstimate est = estimate_log_partition(params, grid, o.samples, rs);
  PartitionBoundsReport bounds = verify_partition_bounds(params, est.log_z);

  CsvWriter csv(ctx.file("energy_curve.csv"), {"beta", "mean_energy", "se"});
  SvgCurve sc;
  sc.label = "mean energy";
  for (std::size_t k = 0; k < est.betas.size(); ++k) {
    csv.row({est.betas[k], est.mean_energies[k], est.se_energies[k]});
    sc.xs.push_back(est.betas[k]);
    sc.ys.push_back(est.mean_energies[k]);
  }
  write_svg_plot(ctx.file("energy_curve.svg"), {sc}, "beta", "mean energy",
                 "thermodynamic integration path");

  write_json_file(ctx.file("logz.json"),
                  {{"log_z", est.log_z},
                   {"se", est.se},
                   {"refinement", est.refinement},
                   {"lower", bounds.lower},
                   {"upper", bounds.upper},
                   {"c_const", bounds.c_const},
                   {"bounds_ok", bounds.ok}});
  ctx.finish();
}

// --------------------------------------------------------------- scan-beta

struct ScanOpts {
  double s = -1.0;
  std::string betas = "0.5,1,2";
  long n = 16;
  long samples = 2000;
  int grid_points = 21;
  long ti_samples = 2000;
  std::uint64_t seed = 1;
  std::string out;
};

void run_scan_beta(const ScanOpts& o, const std::vector<std::string>& argv) {
  std::vector<double> betas = parse_list(o.betas);
  if (betas.empty()) throw CLI::ValidationError("betas", "empty beta list");
  OutputContext ctx(o.out, "scan-beta", argv, o.seed);
  ctx.manifest.parameters = {{"s", o.s},           {"betas", o.betas},
                             {"n", o.n},           {"samples", o.samples},
                             {"grid_points", o.grid_points},
                             {"ti_samples", o.ti_samples}};

  RandomStream root(o.seed);
  CsvWriter csv(ctx.file("scan.csv"),
                {"beta", "mean_energy", "se_energy", "log_z", "se_log_z",
                 "transport_level", "variance_max"});
  SvgCurve energy_curve;
  energy_curve.label = "mean energy";
  for (std::size_t k = 0; k < betas.size(); ++k) {
    double beta = betas[k];
    ModelParams params(o.s, beta, o.n);
    RandomStream sub = root.substream(static_cast<std::uint64_t>(k));

    McmcOptions opt;
    opt.thin = 5 * o.n;
    opt.burn_in = 1000 * o.n;
    opt.steps = opt.thin * o.samples;
    SamplerReport rep;
    RandomStream chain_rs = sub.substream(0);
    SampleBatch batch = mcmc_sample(params, opt, chain_rs, &rep);
    SampleStats est = sample_stats(batch.energies);
    double se = est.se * std::sqrt(std::max(1.0, rep.iact));

    RandomStream ti_rs = sub.substream(1);
    auto grid = uniform_beta_grid(beta, o.grid_points);
    LogZEstimate lz = estimate_log_partition(params, grid, o.ti_samples, ti_rs);

    std::vector<double> costs;
    for (const auto& cfg : batch.configs)
      costs.push_back(windowed_cost(cfg, *cfg.window(), TransportTarget::lebesgue,
                                    2.0) /
                      cfg.window()->length());
    SampleStats cost_stats = sample_stats(costs);

    double var_max = std::numeric_limits<double>::quiet_NaN();
    if (batch.configs.size() >= 30) {
      std::vector<double> ells = {static_cast<double>(o.n) / 8.0,
                                  static_cast<double>(o.n) / 4.0,
                                  static_cast<double>(o.n) / 2.0};
      std::vector<CurvePoint> pts = variance_curve(batch.configs, ells);
      var_max = 0.0;
      for (const auto& pt : pts) var_max = std::max(var_max, pt.value);
    }

    csv.row({beta, est.mean, se, lz.log_z, lz.se, cost_stats.mean, var_max});
    energy_curve.xs.push_back(beta);
    energy_curve.ys.push_back(est.mean);
  }
  write_svg_plot(ctx.file("scan.svg"), {energy_curve}, "beta", "mean energy",
                 "beta scan");
  ctx.finish();
}

// ---------------------------------------------------------------- selftest

struct SelftestOpts {
  std::string level = "fast";
  std::uint64_t seed = 1;
  std::string out;
};

int run_selftest_cmd(const SelftestOpts& o, const std::vector<std::string>& argv) {
  if (o.level != "fast" && o.level != "full")
    throw CLI::ValidationError("level", "must be fast or full");
  OutputContext ctx(o.out, "selftest", argv, o.seed);
  ctx.manifest.parameters = {{"level", o.level}};

  std::vector<CheckResult> results = run_selftest(o.level == "full", o.seed);
  bool all = true;
  json rows = json::array();
  for (const auto& r : results) {
    all = all && r.pass;
    std::cout << (r.pass ? "[ PASS ] " : "[ FAIL ] ") << r.name << " ("
              << std::fixed << std::setprecision(1) << r.elapsed_s << "s)\n"
              << std::defaultfloat << "         " << r.detail << "\n";
    rows.push_back({{"name", r.name},
                    {"pass", r.pass},
                    {"detail", r.detail},
                    {"elapsed_s", r.elapsed_s}});
  }
  std::cout << (all ? "selftest: all checks passed\n"
                    : "selftest: FAILURES present\n");
  write_json_file(ctx.file("report.json"), {{"pass", all}, {"checks", rows}});
  ctx.finish();
  return all ? 0 : 1;
}

}  // namespace

int run_cli(int argc, char** argv) {
  apply_thread_env();
  std::vector<std::string> raw_argv(argv, argv + argc);

  CLI::App app{"long-range one-dimensional particle systems: sampling, energy "
               "evaluation, transport and rigidity diagnostics"};
  app.set_version_flag("--version", RIESZLAB_VERSION);
  app.require_subcommand(1);
  int exit_code = 0;

  GenerateOpts g;
  auto* cg = app.add_subcommand("generate", "draw point configurations");
  cg->add_option("process", g.process,
                 "poisson | lattice | perturbed | counterexample | tiles")
      ->required();
  cg->add_option("--window", g.window, "window as left,right");
  cg->add_option("--samples", g.samples, "number of configurations");
  cg->add_option("--seed", g.seed, "rng seed");
  cg->add_option("--out", g.out, "output directory")->required();
  cg->add_option("--intensity", g.intensity, "poisson intensity");
  cg->add_option("--law", g.law, "perturbation law: gaussian|uniform|laplace|constant");
  cg->add_option("--scale", g.scale, "perturbation scale");
  cg->add_option("--margin", g.margin, "perturbed-lattice margin (negative = auto)");
  cg->add_option("--a,--mass-law", g.mass_law,
                 "multiplicity law: zipf2|geometric|uniform|fixed");
  cg->add_option("--nmax", g.nmax, "multiplicity cap");
  cg->add_option("--q", g.q, "geometric law parameter");
  cg->add_option("--tile-n", g.tile_n, "particles per tile (tiles process)");
  cg->add_option("--beta", g.beta, "inverse temperature (tiles process)");
  cg->callback([&] { run_generate(g, raw_argv); });

  SampleOpts sm;
  auto* cs = app.add_subcommand("sample-riesz", "draw from the Gibbs measure");
  cs->add_option("--s", sm.s, "kernel exponent in (-2,0)")->required();
  cs->add_option("--beta", sm.beta, "inverse temperature")->required();
  cs->add_option("--n", sm.n, "particle count")->required();
  cs->add_option("--method", sm.method, "mcmc | exact");
  cs->add_option("--samples", sm.samples, "recorded samples");
  cs->add_option("--thin", sm.thin, "proposals between records");
  cs->add_option("--burn", sm.burn, "burn-in proposals");
  cs->add_option("--sigma", sm.sigma, "proposal width (negative = auto)");
  cs->add_option("--p-global", sm.p_global, "global proposal probability");
  cs->add_option("--chains", sm.chains, "independent chains");
  cs->add_option("--seed", sm.seed, "rng seed");
  cs->add_option("--out", sm.out, "output directory")->required();
  cs->callback([&] { run_sample_riesz(sm, raw_argv); });

  EnergyOpts en;
  auto* ce = app.add_subcommand("energy", "evaluate the Hamiltonian on a batch");
  ce->add_option("--in", en.in, "configurations (JSONL or CSV)")->required();
  ce->add_option("--s", en.s, "kernel exponent in (-2,0)");
  ce->add_option("--evaluator", en.evaluator, "pairwise | baxter | fourier | all");
  ce->add_option("--abs-tol", en.abs_tol, "spectral quadrature tolerance");
  ce->add_flag("--audit", en.audit, "also run the inequality audit per config");
  ce->add_option("--seed", en.seed, "recorded in the manifest");
  ce->add_option("--out", en.out, "output directory")->required();
  ce->callback([&] { run_energy(en, raw_argv); });

  TransportOpts tr;
  auto* ct = app.add_subcommand("transport", "matching cost against a reference");
  ct->add_option("--in", tr.in, "configurations (JSONL or CSV)")->required();
  ct->add_option("--p", tr.p, "cost exponent (>= 1)");
  ct->add_option("--target", tr.target, "lebesgue | lattice");
  ct->add_option("--lengths", tr.lengths, "windowed curve lengths, comma separated");
  ct->add_option("--seed", tr.seed, "recorded in the manifest");
  ct->add_option("--out", tr.out, "output directory")->required();
  ct->callback([&] { run_transport(tr, raw_argv); });

  DiagnoseOpts di;
  auto* cd = app.add_subcommand("diagnose", "rigidity and transport diagnostics");
  cd->add_option("--in", di.in, "configurations (JSONL or CSV)")->required();
  cd->add_option("--checks", di.checks,
                 "comma list of variance|discrepancy|shift|rigidity|transport");
  cd->add_option("--lengths", di.lengths, "interval lengths (default: auto)");
  cd->add_option("--m", di.m, "estimator depth (0 = auto)");
  cd->add_option("--domain", di.domain, "rigidity domain as left,right");
  cd->add_option("--origin", di.origin, "shift estimator origin (default: center)");
  cd->add_option("--alpha", di.alpha, "test level");
  cd->add_option("--p", di.p, "transport cost exponent");
  cd->add_option("--target", di.target, "lebesgue | lattice");
  cd->add_option("--seed", di.seed, "recorded in the manifest");
  cd->add_option("--out", di.out, "output directory")->required();
  cd->callback([&] { run_diagnose(di, raw_argv); });

  LogzOpts lz;
  auto* cl = app.add_subcommand("logz", "log partition function via integration");
  cl->add_option("--s", lz.s, "kernel exponent in (-2,0)")->required();
  cl->add_option("--beta", lz.beta, "target inverse temperature")->required();
  cl->add_option("--n", lz.n, "particle count")->required();
  cl->add_option("--grid-points", lz.grid_points, "integration grid size");
  cl->add_option("--samples", lz.samples, "samples per grid point");
  cl->add_option("--seed", lz.seed, "rng seed");
  cl->add_option("--out", lz.out, "output directory")->required();
  cl->callback([&] { run_logz(lz, raw_argv); });

  ScanOpts sc;
  auto* cb = app.add_subcommand("scan-beta", "sweep beta, tabulate observables");
  cb->add_option("--s", sc.s, "kernel exponent in (-2,0)")->required();
  cb->add_option("--betas", sc.betas, "comma-separated beta values")->required();
  cb->add_option("--n", sc.n, "particle count")->required();
  cb->add_option("--samples", sc.samples, "mcmc samples per beta");
  cb->add_option("--grid-points", sc.grid_points, "integration grid size");
  cb->add_option("--ti-samples", sc.ti_samples, "samples per integration point");
  cb->add_option("--seed", sc.seed, "rng seed");
  cb->add_option("--out", sc.out, "output directory")->required();
  cb->callback([&] { run_scan_beta(sc, raw_argv); });

  SelftestOpts st;
  auto* cf = app.add_subcommand("selftest", "run the built-in check suites");
  cf->add_option("--level", st.level, "fast | full");
  cf->add_option("--seed", st.seed, "rng seed");
  cf->add_option("--out", st.out, "output directory")->required();
  cf->callback([&] { exit_code = run_selftest_cmd(st, raw_argv); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return exit_code;
}

}  // namespace rieszlab
