#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <optional>

#include "cli_io.hpp"
#include "selftest.hpp"
#include "torusweyl/linops.hpp"
#include "torusweyl/pseudo.hpp"
#include "torusweyl/quantize.hpp"
#include "torusweyl/randmat.hpp"
#include "torusweyl/rmt.hpp"
#include "torusweyl/weyl.hpp"

namespace tw::cli {
namespace {

using nlohmann::json;

struct Common {
  std::string symbol = "scottish_flag";
  int threads = 0;
  std::string out = ".";
  std::string prefix;
};

struct Perturb {
  std::string mode = "absolute";
  double eta = 1e-4;
  double p = 1.5;
  int draws = 20;
  std::uint64_t seed = 0;

  PerturbationSpec spec() const {
    return mode == "absolute" ? PerturbationSpec::absolute(eta, seed, draws)
                              : PerturbationSpec::power(p, seed, draws);
  }
};

void add_common(CLI::App* sub, Common& c, bool with_symbol = true) {
  if (with_symbol) {
    sub->add_option("--symbol", c.symbol,
                    "builtin name (scottish_flag, cos_x, cos_xi), inline JSON, or a JSON file")
        ->capture_default_str();
  }
  sub->add_option("--threads", c.threads, "worker threads (0 = all cores); never changes outputs")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  sub->add_option("--out", c.out, "output directory")->capture_default_str();
  sub->add_option("--prefix", c.prefix, "output file prefix (default: subcommand name)");
}

void add_perturbation(CLI::App* sub, Perturb& p, int default_draws) {
  p.draws = default_draws;
  sub->add_option("--mode", p.mode, "perturbation scaling")
      ->check(CLI::IsMember({"absolute", "power"}))
      ->capture_default_str();
  sub->add_option("--eta", p.eta, "operator norm of E (absolute mode)")->capture_default_str();
  sub->add_option("--p", p.p, "E = N^-p Q (power mode)")->capture_default_str();
  sub->add_option("--draws", p.draws, "independent perturbations")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("--seed", p.seed, "master seed")->capture_default_str();
}

json common_json(const Common& c, const std::string& canonical_symbol) {
  json j{{"threads", c.threads}};
  if (!canonical_symbol.empty()) j["symbol"] = canonical_symbol;
  return j;
}

void record_perturbation(json& params, const Perturb& p) {
  params["mode"] = p.mode;
  params["eta"] = p.eta;
  params["p"] = p.p;
  params["draws"] = p.draws;
  params["seed"] = p.seed;
}

/// Fixed top-level manifest fields; null where they do not apply.
void set_meta(Run& run, const ParsedSymbol* sym, std::optional<int> N, const Perturb* p,
              std::optional<int> M, std::optional<std::uint64_t> seed = std::nullopt) {
  auto& m = run.manifest();
  m["symbol_hash"] = sym ? json(sym->symbol.hash_hex()) : json();
  m["n"] = sym ? json(sym->symbol.dimension()) : json();
  m["N"] = N ? json(*N) : json();
  m["grid_M"] = M ? json(*M) : json();
  if (p) {
    m["seed"] = p->seed;
    m["mode"] = p->mode;
    if (p->mode == "absolute") m["eta"] = p->eta;
    else m["p"] = p->p;
    m["draws"] = p->draws;
  } else {
    m["seed"] = seed ? json(*seed) : json();
    m["mode"] = json();
    m["eta"] = json();
    m["draws"] = json();
  }
}

std::vector<Complex> sorted_spectrum(const CVector& e) {
  std::vector<Complex> v(e.begin(), e.end());
  std::sort(v.begin(), v.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return v;
}

CsvTable spectra_table(const std::vector<CVector>& spectra) {
  CsvTable t({"draw_index", "re", "im"});
  for (std::size_t k = 0; k < spectra.size(); ++k) {
    for (const Complex z : sorted_spectrum(spectra[k])) t.row().cell(k).cell(z.real()).cell(z.imag());
  }
  return t;
}

std::string complex_arg(Complex z) { return format_double(z.real()) + "," + format_double(z.imag()); }

// --- subcommands -----------------------------------------------------------

struct QuantizeCmd {
  Common common;
  int N = 0;
  bool nonzeros_only = false;

  void attach(CLI::App& app) {
    auto* sub = app.add_subcommand("quantize", "dump the quantized matrix f_N");
    add_common(sub, common);
    sub->add_option("--N", N, "quantum parameter")->required()->check(CLI::PositiveNumber);
    sub->add_flag("--nonzeros-only", nonzeros_only, "omit exactly-zero entries");
  }

  int execute(std::ostream& out) {
    const auto sym = parse_symbol(common.symbol);
    Run run("quantize", common.out, common.prefix);
    run.parameters() = common_json(common, sym.canonical);
    run.parameters()["N"] = N;
    run.parameters()["nonzeros-only"] = nonzeros_only;
    set_meta(run, &sym, N, nullptr, std::nullopt);

    const auto op = quantize(sym.symbol, N, common.threads);
    CsvTable t({"row_index", "col_index", "re", "im"});
    for (Eigen::Index r = 0; r < op.matrix.rows(); ++r) {
      for (Eigen::Index c = 0; c < op.matrix.cols(); ++c) {
        const Complex v = op.matrix(r, c);
        if (nonzeros_only && v == Complex{}) continue;
        t.row().cell(static_cast<long long>(r)).cell(static_cast<long long>(c)).cell(v.real()).cell(v.imag());
      }
    }
    run.write_csv("matrix", t);
    out << "wrote " << run.finish().string() << '\n';
    return kSuccess;
  }
};

struct SpectrumCmd {
  Common common;
  Perturb perturb;
  int N = 0;

  void attach(CLI::App& app) {
    auto* sub = app.add_subcommand("spectrum", "eigenvalues of f_N + E for each draw");
    add_common(sub, common);
    sub->add_option("--N", N, "quantum parameter")->required()->check(CLI::PositiveNumber);
    add_perturbation(sub, perturb, 100);
  }

  int execute(std::ostream& out) {
    const auto sym = parse_symbol(common.symbol);
    Run run("spectrum", common.out, common.prefix);
    run.parameters() = common_json(common, sym.canonical);
    run.parameters()["N"] = N;
    record_perturbation(run.parameters(), perturb);
    set_meta(run, &sym, N, &perturb, std::nullopt);

    const auto spectra = perturbed_spectra(sym.symbol, N, perturb.spec(), common.threads);
    run.write_csv("spectra", spectra_table(spectra));
    out << "wrote " << run.finish().string() << '\n';
    return kSuccess;
  }
};

struct WeylSweepCmd {
  Common common;
  Perturb perturb;
  int N = 100;
  std::string region = "disk";
  std::string center = "0,0";
  std::string r_grid = "0.1:0.9:0.1";
  int M = kDefaultVolumeGrid;
  bool write_spectra = false;

  void attach(CLI::App& app) {
    auto* sub = app.add_subcommand("weyl-sweep", "counting function against the Weyl law over r");
    add_common(sub, common);
    sub->add_option("--N", N, "quantum parameter")->check(CLI::PositiveNumber)->capture_default_str();
    add_perturbation(sub, perturb, 20);
    sub->add_option("--region", region, "region family")
        ->check(CLI::IsMember({"disk", "strip"}))
        ->capture_default_str();
    sub->add_option("--center", center, "family centre 're,im' (strips use Re)")->capture_default_str();
    sub->add_option("--r", r_grid, "inclusive start:stop:step")->capture_default_str();
    sub->add_option("--M", M, "volume grid per axis")->check(CLI::Range(64, 1 << 16))->capture_default_str();
    sub->add_flag("--write-spectra", write_spectra, "also write the perturbed spectra");
  }

  int execute(std::ostream& out) {
    const auto sym = parse_symbol(common.symbol);
    const auto radii = parse_range(r_grid);
    const Complex c = parse_complex(center);
    Run run("weyl-sweep", common.out, common.prefix);
    auto& params = run.parameters();
    params = common_json(common, sym.canonical);
    params["N"] = N;
    record_perturbation(params, perturb);
    params["region"] = region;
    params["center"] = complex_arg(c);
    params["r"] = r_grid;
    params["M"] = M;
    params["write-spectra"] = write_spectra;
    set_meta(run, &sym, N, &perturb, M);

    const RegionFamily family{region == "disk" ? RegionFamily::Kind::disk : RegionFamily::Kind::strip, c};
    const auto spec = perturb.spec();
    if (spec.draws < 2) throw PreconditionError("weyl-sweep needs --draws >= 2");
    const auto spectra = perturbed_spectra(sym.symbol, N, spec, common.threads);
    const auto rows = counting_sweep(spectra, sym.symbol, N, family, radii, M, common.threads);

    CsvTable t({"r", "mean_count", "stderr", "weyl_prediction"});
    json gaps = json::array();
    for (std::size_t i = 0; i < rows.size(); ++i) {
      t.row().cell(radii[i]).cell(rows[i].mean_count).cell(rows[i].stderr_count).cell(rows[i].weyl_prediction);
      gaps.push_back(rows[i].relative_gap);
    }
    run.write_csv("counting", t);
    if (write_spectra) run.write_csv("spectra", spectra_table(spectra));
    run.manifest()["results"] = {{"relative_gap", gaps}};
    out << "wrote " << run.finish().string() << '\n';
    return kSuccess;
  }
};

struct KappaFitCmd {
  Common common;
  std::string z = "0,0";
  double tmin = 1e-2;
  double tmax = 1e-1;
  int points = 12;
  int M = kDefaultVolumeGrid;

  void attach(CLI::App& app) {
    auto* sub = app.add_subcommand("kappa-fit", "sublevel volumes vol{|f - z| <= t} and their log-log slope");
    add_common(sub, common);
    sub->add_option("--z", z, "centre 're,im'")->capture_default_str();
    sub->add_option("--tmin", tmin)->capture_default_str();
    sub->add_option("--tmax", tmax)->capture_default_str();
    sub->add_option("--points", points)->capture_default_str();
    sub->add_option("--M", M, "volume grid per axis")->check(CLI::Range(64, 1 << 16))->capture_default_str();
  }

  int execute(std::ostream& out) {
    const auto sym = parse_symbol(common.symbol);
    const Complex zc = parse_complex(z);
    Run run("kappa-fit", common.out, common.prefix);
    auto& params = run.parameters();
    params = common_json(common, sym.canonical);
    params["z"] = complex_arg(zc);
    params["tmin"] = tmin;
    params["tmax"] = tmax;
    params["points"] = points;
    params["M"] = M;
    set_meta(run, &sym, std::nullopt, nullptr, M);

    const auto fit = kappa_fit(sym.symbol, zc, tmin, tmax, points, M, common.threads);
    CsvTable t({"t", "volume"});
    for (std::size_t i = 0; i < fit.t_grid.size(); ++i) t.row().cell(fit.t_grid[i]).cell(fit.volumes[i]);
    run.write_csv("kappa", t);
    run.manifest()["results"] = {{"has_fit", fit.has_fit},
                                 {"kappa_hat", fit.has_fit ? json(fit.kappa_hat) : json()},
                                 {"fit_residual", fit.has_fit ? json(fit.fit_residual) : json()}};
    out << "wrote " << run.finish().string() << '\n';
    if (fit.has_fit) out << "kappa_hat = " << format_double(fit.kappa_hat) << '\n';
    else out << "no fit: all sublevel volumes vanish\n";
    return kSuccess;
  }
};

struct PseudospectrumCmd {
  Common common;
  int N = 100;
  std::string lower_left = "-1.6,-1.6";
  std::string upper_right = "1.6,1.6";
  int columns = 161;
  int rows = 161;

  void attach(CLI::App& app) {
    auto* sub = app.add_subcommand("pseudospectrum", "sigma_min(f_N - z) on a rectangular grid");
    add_common(sub, common);
    sub->add_option("--N", N, "quantum parameter")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--lower-left", lower_left, "'re,im'")->capture_default_str();
    sub->add_option("--upper-right", upper_right, "'re,im'")->capture_default_str();
    sub->add_option("--columns", columns, "nodes along Re z")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--rows", rows, "nodes along Im z")->check(CLI::PositiveNumber)->capture_default_str();
  }

  int execute(std::ostream& out) {
    const auto sym = parse_symbol(common.symbol);
    ComplexGrid grid{parse_complex(lower_left), parse_complex(upper_right), columns, rows};
    grid.validate();
    Run run("pseudospectrum", common.out, common.prefix);
    auto& params = run.parameters();
    params = common_json(common, sym.canonical);
    params["N"] = N;
    params["lower-left"] = complex_arg(grid.lower_left);
    params["upper-right"] = complex_arg(grid.upper_right);
    params["columns"] = columns;
    params["rows"] = rows;
    set_meta(run, &sym, N, nullptr, std::nullopt);

    const auto portrait = sigma_min_grid(sym.symbol, N, grid, common.threads);
    CsvTable t({"re_z", "im_z", "sigma_min"});
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < columns; ++c) {
        const Complex z = grid.node(r, c);
        t.row().cell(z.real()).cell(z.imag()).cell(portrait.values(r, c));
      }
    }
    run.write_csv("portrait", t);
    out << "wrote " << run.finish().string() << '\n';
    return kSuccess;
  }
};

struct BracketMapCmd {
  Common common;
  int M = 64;

  void attach(CLI::App& app) {
    auto* sub = app.add_subcommand("bracket-map", "{Re f, Im f} on the torus nodes (i/M, j/M)");
    add_common(sub, common);
    sub->add_option("--M", M, "nodes per axis")->check(CLI::Range(1, 1 << 14))->capture_default_str();
  }

  int execute(std::ostream& out) {
    const auto sym = parse_symbol(common.symbol);
    Run run("bracket-map", common.out, common.prefix);
    run.parameters() = common_json(common, sym.canonical);
    run.parameters()["M"] = M;
    set_meta(run, &sym, std::nullopt, nullptr, M);

    const auto map = bracket_sign_map(sym.symbol, M);
    CsvTable t({"x", "xi", "bracket"});
    for (int i = 0; i < M; ++i)
      for (int j = 0; j < M; ++j)
        t.row().cell(static_cast<double>(i) / M).cell(static_cast<double>(j) / M).cell(map(i, j));
    run.write_csv("bracket", t);
    out << "wrote " << run.finish().string() << '\n';
    return kSuccess;
  }
};

struct RmtFig3Cmd {
  Common common;
  std::uint64_t matrix_seed = kDiagonalMatrixSeed;
  std::uint64_t seed = 0;
  int samples = 32000;
  int t_nodes = 16;
  int blocks = kDefaultBlocks;
  std::string log10_inv_delta = "1:6:1";

  void attach(CLI::App& app) {
    auto* sub = app.add_subcommand("rmt-fig3", "integral bound for diag(0, 0, u_1..u_8) against its upper bound");
    add_common(sub, common, false);
    sub->add_option("--matrix-seed", matrix_seed, "seed for the diagonal entries u_i")->capture_default_str();
    sub->add_option("--seed", seed, "Monte Carlo master seed")->capture_default_str();
    sub->add_option("--samples", samples)->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--t-nodes", t_nodes)->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--blocks", blocks, "median-of-means blocks")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--log10-inv-delta", log10_inv_delta, "start:stop:step grid of log10(1/delta)")
        ->capture_default_str();
  }

  int execute(std::ostream& out) {
    const auto grid = parse_range(log10_inv_delta);
    Run run("rmt-fig3", common.out, common.prefix);
    auto& params = run.parameters();
    params = common_json(common, "");
    params["matrix-seed"] = matrix_seed;
    params["seed"] = seed;
    params["samples"] = samples;
    params["t-nodes"] = t_nodes;
    params["blocks"] = blocks;
    params["log10-inv-delta"] = log10_inv_delta;
    set_meta(run, nullptr, std::nullopt, nullptr, std::nullopt, seed);
    run.manifest()["draws"] = samples;

    const CMatrix a = seeded_diagonal_matrix(matrix_seed);
    Prop31Options opts;
    opts.t_nodes = t_nodes;
    opts.samples = samples;
    opts.seed = seed;
    opts.blocks = blocks;
    opts.threads = common.threads;

    CsvTable t({"log10_inv_delta", "lhs", "rhs_C1"});
    json details = json::array();
    for (double k : grid) {
      const double delta = std::pow(10.0, -k);
      const auto lhs = prop31_lhs(a, delta, opts);
      const double rhs = prop31_rhs(a, delta, 1.0);
      t.row().cell(k).cell(lhs.value).cell(rhs);
      details.push_back({{"delta", delta}, {"stderr", lhs.stderr_value},
                         {"rejections", lhs.rejections}, {"flagged", lhs.flagged},
                         {"below_bound", lhs.value <= rhs}});
    }
    run.write_csv("fig3", t);
    run.manifest()["results"] = details;
    out << "wrote " << run.finish().string() << '\n';
    return kSuccess;
  }
};

struct ContourCmd {
  Common common;
  int N = 40;
  std::string z_minus = "-0.03,0";
  std::string z_plus = "0.03,0";
  std::string z0 = "0,0";
  double alpha = 0.3;
  double delta = 1e-3;
  int samples = 3200;
  int blocks = kDefaultBlocks;
  std::uint64_t seed = 0;

  void attach(CLI::App& app) {
    auto* sub = app.add_subcommand("contour", "random vs regularized trace integrals along a segment");
    add_common(sub, common);
    sub->add_option("--N", N, "quantum parameter")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--z-minus", z_minus, "segment start 're,im'")->capture_default_str();
    sub->add_option("--z-plus", z_plus, "segment end 're,im'")->capture_default_str();
    sub->add_option("--z0", z0, "recentring point on the segment")->capture_default_str();
    sub->add_option("--alpha", alpha)->capture_default_str();
    sub->add_option("--delta", delta)->capture_default_str();
    sub->add_option("--samples", samples)->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--blocks", blocks)->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--seed", seed, "Monte Carlo master seed")->capture_default_str();
  }

  int execute(std::ostream& out) {
    const auto sym = parse_symbol(common.symbol);
    const ContourSegment gamma{parse_complex(z_minus), parse_complex(z_plus)};
    const Complex center = parse_complex(z0);
    Run run("contour", common.out, common.prefix);
    auto& params = run.parameters();
    params = common_json(common, sym.canonical);
    params["N"] = N;
    params["z-minus"] = complex_arg(gamma.z_minus);
    params["z-plus"] = complex_arg(gamma.z_plus);
    params["z0"] = complex_arg(center);
    params["alpha"] = alpha;
    params["delta"] = delta;
    params["samples"] = samples;
    params["blocks"] = blocks;
    params["seed"] = seed;
    set_meta(run, &sym, N, nullptr, std::nullopt, seed);
    run.manifest()["draws"] = samples;

    ContourOptions opts;
    opts.samples = samples;
    opts.seed = seed;
    opts.blocks = blocks;
    opts.threads = common.threads;
    const auto r = contour_trace_pair(sym.symbol, N, gamma, center, alpha, delta, opts);
    CsvTable t({"re_I", "im_I", "stderr", "re_Itilde", "im_Itilde"});
    t.row()
        .cell(r.random_integral.value.real())
        .cell(r.random_integral.value.imag())
        .cell(r.random_integral.stderr_value)
        .cell(r.regularized_integral.real())
        .cell(r.regularized_integral.imag());
    run.write_csv("contour", t);
    run.manifest()["results"] = {{"gate_bound", r.gate_bound}, {"gate_passed", r.gate_passed},
                                 {"difference", std::abs(r.random_integral.value - r.regularized_integral)}};
    out << "wrote " << run.finish().string() << '\n';
    out << "gate " << (r.gate_passed ? "passed" : "failed") << '\n';
    return kSuccess;
  }
};

struct ConjectureCmd {
  Common common;
  Perturb perturb;
  std::string N_list = "50,200";
  int bins = 24;
  int M = 1024;

  void attach(CLI::App& app) {
    auto* sub = app.add_subcommand("conjecture", "empirical spectral measure vs pushforward, over N");
    add_common(sub, common);
    add_perturbation(sub, perturb, 10);
    sub->add_option("--N-list", N_list, "comma-separated N values")->capture_default_str();
    sub->add_option("--bins", bins, "histogram cells per axis")->check(CLI::Range(8, 4096))->capture_default_str();
    sub->add_option("--M", M, "volume grid per axis")->check(CLI::Range(64, 1 << 16))->capture_default_str();
  }

  int execute(std::ostream& out) {
    const auto sym = parse_symbol(common.symbol);
    const auto Ns = parse_int_list(N_list);
    Run run("conjecture", common.out, common.prefix);
    auto& params = run.parameters();
    params = common_json(common, sym.canonical);
    record_perturbation(params, perturb);
    params["N-list"] = N_list;
    params["bins"] = bins;
    params["M"] = M;
    set_meta(run, &sym, std::nullopt, &perturb, M);
    run.manifest()["N"] = Ns;

    CsvTable t({"N", "distance"});
    std::vector<double> dist;
    for (int N : Ns) {
      dist.push_back(empirical_measure_distance(sym.symbol, N, perturb.spec(), bins, M, common.threads));
      t.row().cell(N).cell(dist.back());
    }
    run.write_csv("distance", t);
    bool decreasing = true;
    for (std::size_t i = 0; i + 1 < dist.size(); ++i) decreasing = decreasing && dist[i + 1] < dist[i];
    run.manifest()["results"] = {{"strictly_decreasing", decreasing}};
    out << "wrote " << run.finish().string() << '\n';
    return kSuccess;
  }
};

struct SelftestCmd {
  Common common;

  void attach(CLI::App& app) {
    auto* sub = app.add_subcommand("selftest", "run the invariant suite");
    add_common(sub, common, false);
  }

  int execute(std::ostream& out) {
    Run run("selftest", common.out, common.prefix);
    run.parameters() = common_json(common, "");
    set_meta(run, nullptr, std::nullopt, nullptr, std::nullopt);
    const auto checks = run_selftest(common.threads);
    CsvTable t({"check", "passed", "value"});
    bool all = true;
    for (const auto& c : checks) {
      t.row().cell(c.name).cell(c.passed ? 1 : 0).cell(c.value);
      out << (c.passed ? "[PASS] " : "[FAIL] ") << c.name << " (" << format_double(c.value) << ")\n";
      all = all && c.passed;
    }
    run.write_csv("checks", t);
    run.manifest()["results"] = {{"all_passed", all}};
    out << "wrote " << run.finish().string() << '\n';
    return all ? kSuccess : kNumerical;
  }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Probabilistic Weyl laws for quantized tori: experiment runner", "torusweyl"};
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON config or a previous run's manifest; flags override it");
  app.allow_config_extras(CLI::config_extras_mode::ignore);
  app.option_defaults()->configurable(true);
  app.fallthrough();
  app.require_subcommand(1);
  app.set_version_flag("--version", TORUSWEYL_VERSION);

  QuantizeCmd quantize_cmd;
  SpectrumCmd spectrum_cmd;
  WeylSweepCmd weyl_cmd;
  KappaFitCmd kappa_cmd;
  PseudospectrumCmd pseudo_cmd;
  BracketMapCmd bracket_cmd;
  RmtFig3Cmd fig3_cmd;
  ContourCmd contour_cmd;
  ConjectureCmd conjecture_cmd;
  SelftestCmd selftest_cmd;
  quantize_cmd.attach(app);
  spectrum_cmd.attach(app);
  weyl_cmd.attach(app);
  kappa_cmd.attach(app);
  pseudo_cmd.attach(app);
  bracket_cmd.attach(app);
  fig3_cmd.attach(app);
  contour_cmd.attach(app);
  conjecture_cmd.attach(app);
  selftest_cmd.attach(app);

  std::vector<const char*> argv{"torusweyl"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kSuccess : kUsage;
  }

  try {
    const auto* sub = app.get_subcommands().front();
    const std::string& name = sub->get_name();
    if (name == "quantize") return quantize_cmd.execute(out);
    if (name == "spectrum") return spectrum_cmd.execute(out);
    if (name == "weyl-sweep") return weyl_cmd.execute(out);
    if (name == "kappa-fit") return kappa_cmd.execute(out);
    if (name == "pseudospectrum") return pseudo_cmd.execute(out);
    if (name == "bracket-map") return bracket_cmd.execute(out);
    if (name == "rmt-fig3") return fig3_cmd.execute(out);
    if (name == "contour") return contour_cmd.execute(out);
    if (name == "conjecture") return conjecture_cmd.execute(out);
    if (name == "selftest") return selftest_cmd.execute(out);
    err << "unknown subcommand " << name << '\n';
    return kUsage;
  } catch (const PreconditionError& e) {
    err << "precondition violated: " << e.what() << '\n';
    return kPrecondition;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what();
    if (e.has_seed()) err << " [draw seed " << e.seed() << ']';
    err << '\n';
    return kNumerical;
  } catch (const nlohmann::json::exception& e) {
    err << "bad JSON input: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << '\n';
    return kNumerical;
  }
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace tw::cli
