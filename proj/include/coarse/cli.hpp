#pragma once

#include <chrono>
#include <ctime>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "coarse/io.hpp"

namespace coarse {

namespace cli_detail {

inline std::string timestamp_now() {
  auto now = std::chrono::system_clock::now();
  std::time_t tt = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&tt));
  return buf;
}

struct SpaceArgs {
  std::string space;  // grid | circle-pack
  int dim = 2;
  double half_extent = 12;
  double spacing = 1.0;
  int circles = 5;
  int points_per_circle = 24;
  std::string input;  // JSON or CSV path
  bool strict_metric = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--space", space, "generator: grid | circle-pack");
    cmd->add_option("--dim", dim, "grid dimension (1..3)");
    cmd->add_option("--half-extent", half_extent, "grid half extent");
    cmd->add_option("--spacing", spacing, "grid spacing");
    cmd->add_option("--circles", circles, "number of circles");
    cmd->add_option("--points-per-circle", points_per_circle, "samples per circle");
    cmd->add_option("--input", input, "space file (.json table/point cloud, .csv table)");
    cmd->add_flag("--strict-metric", strict_metric, "reject triangle violations on load");
  }

  bool is_circle_pack() const { return space == "circle-pack"; }

  std::pair<FiniteMetricSpace, std::optional<CirclePackSpace>> load() const {
    if (!input.empty()) {
      if (input.size() > 4 && input.substr(input.size() - 4) == ".csv") {
        std::ifstream in(input);
        if (!in) throw BadInput("cannot open " + input);
        return {space_from_csv(in, strict_metric), std::nullopt};
      }
      return {space_from_json(read_json_file(input), strict_metric), std::nullopt};
    }
    if (space == "grid") return {generate_grid(dim, half_extent, spacing), std::nullopt};
    if (space == "circle-pack") {
      CirclePackSpace pack = generate_circle_pack(circles, points_per_circle);
      return {pack.space, std::move(pack)};
    }
    throw BadInput("need --space grid|circle-pack or --input FILE");
  }

  OrderedJson config_json() const {
    OrderedJson j;
    if (!input.empty()) {
      j["input"] = input;
    } else {
      j["space"] = space;
      if (space == "grid") {
        j["dim"] = dim;
        j["half_extent"] = half_extent;
        j["spacing"] = spacing;
      } else {
        j["circles"] = circles;
        j["points_per_circle"] = points_per_circle;
      }
    }
    return j;
  }
};

/// Subset selectors: ids:1,2,3 | ball:R (around the basepoint) |
/// nonpos-x (coordinate x <= 0) | ray (circle-pack ray points).
inline Selection parse_subset(const std::string& spec, const FiniteMetricSpace& X,
                              const std::optional<CirclePackSpace>& pack) {
  if (spec == "ray") {
    if (!pack) throw BadInput("--subset ray needs --space circle-pack");
    return pack->ray_selection();
  }
  if (spec.rfind("ball:", 0) == 0) {
    double r = std::stod(spec.substr(5));
    return neighborhood(X, Selection({X.require_basepoint()}), r);
  }
  if (spec == "nonpos-x") {
    if (X.coords.empty()) throw BadInput("--subset nonpos-x needs coordinates");
    std::vector<PointId> ids;
    for (PointId p = 0; p < X.size(); ++p)
      if (X.coords[p][0] <= kDistTol) ids.push_back(p);
    return Selection(std::move(ids));
  }
  if (spec.rfind("ids:", 0) == 0) {
    std::vector<PointId> ids;
    std::stringstream ss(spec.substr(4));
    std::string tok;
    while (std::getline(ss, tok, ',')) ids.push_back(static_cast<PointId>(std::stol(tok)));
    return Selection(std::move(ids));
  }
  throw BadInput("unknown subset spec: " + spec);
}

inline void emit(const std::string& out_prefix, const OrderedJson& envelope,
                 const std::string& tsv = "") {
  if (out_prefix.empty()) {
    std::cout << envelope.dump(2) << std::endl;
  } else {
    write_text_file(out_prefix + ".json", envelope.dump(2) + "\n");
    if (!tsv.empty()) write_text_file(out_prefix + ".tsv", tsv);
  }
}

template <class Fn>
auto with_tower_field(Ring ring, Fn&& fn) {
  // Z towers report per-stage torsion via Smith form; induced maps are
  // computed over Q, where ranks agree with the free part.
  if (ring == Ring::GF2) return fn(GF2());
  return fn(Rational());
}

inline ControlFunction parse_control(const std::string& spec,
                                     const std::optional<CirclePackSpace>& pack) {
  if (spec.rfind("const:", 0) == 0) return ControlFunction::constant(std::stod(spec.substr(6)));
  if (spec.rfind("affine:", 0) == 0) {  // affine:slope,intercept
    auto rest = spec.substr(7);
    auto comma = rest.find(',');
    if (comma == std::string::npos) throw BadInput("affine control needs slope,intercept");
    return ControlFunction::affine(std::stod(rest.substr(0, comma)),
                                   std::stod(rest.substr(comma + 1)));
  }
  if (spec == "figure") {
    if (!pack) throw BadInput("figure control function needs --space circle-pack");
    return circle_pack_mu(*pack);
  }
  throw BadInput("unknown control spec: " + spec + " (const:c | affine:a,b | figure)");
}

}  // namespace cli_detail

/// Entry point of the coarsecoh command-line tool.
/// 0 on success, 1 on computation error, 2 on usage error.
inline int cli_run(std::vector<std::string> args) {
  using namespace cli_detail;
  CLI::App app{"coarse cohomology of finite metric models"};
  app.require_subcommand(1);

  // shared knobs
  std::string out_prefix;
  std::string ring_name_s = "gf2";
  double eps = 1.5;
  int threads = 0;
  std::uint64_t seed = 0;

  auto add_shared = [&](CLI::App* cmd, bool needs_seed = false) {
    cmd->add_option("--out", out_prefix, "output prefix (writes PREFIX.json [+ PREFIX.tsv])");
    cmd->add_option("--ring", ring_name_s, "coefficients: gf2 | q | z");
    cmd->add_option("--scale,--eps", eps, "Rips scale");
    cmd->add_option("--threads", threads, "worker cap (0 = hardware)");
    auto* s = cmd->add_option("--seed", seed, "PRNG seed");
    if (needs_seed) s->required();
  };

  // ---- gen ----
  SpaceArgs gen_space;
  auto* gen = app.add_subcommand("gen", "emit an example space as JSON");
  gen_space.attach(gen);
  gen->add_option("--out", out_prefix, "output prefix");

  // ---- rips ----
  SpaceArgs rips_space;
  int rips_max_dim = 3;
  bool rips_full = false;
  auto* rips = app.add_subcommand("rips", "Vietoris-Rips complex at a scale");
  rips_space.attach(rips);
  rips->add_option("--max-dim", rips_max_dim, "maximum simplex dimension");
  rips->add_flag("--emit-simplices", rips_full, "include full simplex lists");
  add_shared(rips);

  // ---- betti ----
  SpaceArgs betti_space;
  int betti_max_dim = 3;
  auto* betti = app.add_subcommand("betti", "cohomology of the Rips complex");
  betti_space.attach(betti);
  betti->add_option("--max-dim", betti_max_dim, "complex dimension (degrees 0..max-dim-1)");
  add_shared(betti);

  // ---- tower ----
  SpaceArgs tower_space;
  std::string tower_subset;
  int tower_max_degree = 2;
  int tower_stages = 12;
  std::vector<double> tower_grid;
  auto* tower = app.add_subcommand("tower", "complement tower about a base");
  tower_space.attach(tower);
  tower->add_option("--base", tower_subset, "base subset (default: basepoint)");
  tower->add_option("--max-degree", tower_max_degree, "top cohomology degree per stage");
  tower->add_option("--stages", tower_stages, "stage count for the default grid");
  tower->add_option("--r-grid", tower_grid, "explicit stage radii")->expected(-1);
  add_shared(tower);

  // ---- coarse ----
  SpaceArgs coarse_space;
  int coarse_max_degree = 3;
  int coarse_stages = 12;
  auto* coarse_cmd = app.add_subcommand("coarse", "coarse cohomology profile");
  coarse_space.attach(coarse_cmd);
  coarse_cmd->add_option("--max-degree", coarse_max_degree, "top profile degree");
  coarse_cmd->add_option("--stages", coarse_stages, "tower stage count");
  add_shared(coarse_cmd);

  // ---- complement ----
  SpaceArgs comp_space;
  std::string comp_subset;
  int comp_max_degree = 3;
  int comp_stages = 12;
  auto* comp = app.add_subcommand("complement", "coarse cohomology of the complement of A");
  comp_space.attach(comp);
  comp->add_option("--subset", comp_subset, "the subset A")->required();
  comp->add_option("--max-degree", comp_max_degree, "top profile degree");
  comp->add_option("--stages", comp_stages, "tower stage count");
  add_shared(comp);

  // ---- check-dA ----
  SpaceArgs da_space;
  std::string da_subset;
  int da_stages = 12;
  auto* da = app.add_subcommand("check-dA", "d_A quotient consistency cross-check");
  da_space.attach(da);
  da->add_option("--subset", da_subset, "the subset A")->required();
  da->add_option("--stages", da_stages, "tower stage count");
  add_shared(da);

  // ---- check-acyclic ----
  SpaceArgs ac_space;
  std::string ac_mu = "const:0", ac_rho = "affine:1,2";
  int ac_max_dim = 2;
  int ac_radii = 5, ac_centers = 8;
  auto* ac = app.add_subcommand("check-acyclic", "uniform acyclicity at infinity (sampled)");
  ac_space.attach(ac);
  ac->add_option("--mu", ac_mu, "control mu: const:c | affine:a,b | figure");
  ac->add_option("--rho", ac_rho, "control rho: const:c | affine:a,b | figure");
  ac->add_option("--max-dim", ac_max_dim, "check degrees below this");
  ac->add_option("--radii", ac_radii, "number of sampled radii");
  ac->add_option("--centers", ac_centers, "centers per radius");
  add_shared(ac, /*needs_seed=*/true);

  // ---- fill ----
  SpaceArgs fill_space;
  int fill_max_dim = 2;
  bool fill_audit = false;
  double fill_cap = -1;
  auto* fill = app.add_subcommand("fill", "controlled filling map M on the far subcomplex");
  fill_space.attach(fill);
  fill->add_option("--max-dim", fill_max_dim, "fill dimensions up to this");
  fill->add_flag("--audit", fill_audit, "collect FillingNotFound instead of failing");
  fill->add_option("--radius-cap", fill_cap, "absolute neighborhood cap");
  add_shared(fill);

  // ---- verify-homotopy ----
  SpaceArgs vh_space;
  int vh_count = 100;
  int vh_max_dim = 3;
  int vh_samples = 20;
  double vh_disp = 3.0;
  auto* vh = app.add_subcommand("verify-homotopy",
                                "cone homotopy identity on random controlled maps");
  vh_space.attach(vh);
  vh->add_option("--count", vh_count, "number of random chain maps");
  vh->add_option("--max-dim", vh_max_dim, "degrees checked");
  vh->add_option("--samples", vh_samples, "tuples sampled per degree");
  vh->add_option("--displacement", vh_disp, "vertex map displacement bound");
  add_shared(vh, /*needs_seed=*/true);

  // ---- full-cochain ----
  SpaceArgs fc_space;
  int fc_max_degree = 3;
  auto* fc = app.add_subcommand("full-cochain", "ground-truth cohomology of C*(X)");
  fc_space.attach(fc);
  fc->add_option("--max-degree", fc_max_degree, "top degree");
  add_shared(fc);

  std::vector<const char*> argv;
  argv.push_back("coarsecoh");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      app.exit(e);
      return 0;
    }
    std::cerr << e.what() << std::endl;
    return 2;
  }

  try {
    const std::string ts = timestamp_now();
    Ring ring = parse_ring(ring_name_s);

    if (gen->parsed()) {
      auto [X, pack] = gen_space.load();
      OrderedJson result = space_to_json(X);
      emit(out_prefix, result_envelope("gen", gen_space.config_json(), result, result, ts));
      return 0;
    }

    if (rips->parsed()) {
      auto [X, pack] = rips_space.load();
      SimplicialComplex K = rips_complex(X, eps, rips_max_dim);
      OrderedJson result;
      OrderedJson counts = OrderedJson::array();
      for (int k = 0; k <= K.max_dim; ++k) counts.push_back(K.dim_count(k));
      result["simplex_counts"] = std::move(counts);
      if (rips_full) result["complex"] = complex_to_json(K);
      OrderedJson cfg = rips_space.config_json();
      cfg["scale"] = eps;
      cfg["max_dim"] = rips_max_dim;
      std::ostringstream tsv;
      tsv << "dim\tcount\n";
      for (int k = 0; k <= K.max_dim; ++k) tsv << k << '\t' << K.dim_count(k) << '\n';
      emit(out_prefix, result_envelope("rips", cfg, space_to_json(X), result, ts), tsv.str());
      return 0;
    }

    if (betti->parsed()) {
      auto [X, pack] = betti_space.load();
      SimplicialComplex K = rips_complex(X, eps, betti_max_dim);
      auto groups = cohomology_groups(K, ring, betti_max_dim - 1, /*reduced=*/false);
      OrderedJson result;
      result["groups"] = groups_to_json(groups);
      OrderedJson cfg = betti_space.config_json();
      cfg["scale"] = eps;
      cfg["max_dim"] = betti_max_dim;
      cfg["ring"] = ring_name_s;
      emit(out_prefix, result_envelope("betti", cfg, space_to_json(X), result, ts),
           groups_to_tsv(groups));
      return 0;
    }

    if (tower->parsed()) {
      auto [X, pack] = tower_space.load();
      Selection base = tower_subset.empty() ? Selection({X.require_basepoint()})
                                            : parse_subset(tower_subset, X, pack);
      TowerParams tp;
      tp.eps = eps;
      tp.max_degree = tower_max_degree;
      tp.ring = ring;
      tp.threads = threads;
      tp.r_grid = tower_grid.empty() ? default_r_grid(X, eps, tower_stages) : tower_grid;
      OrderedJson cfg = tower_space.config_json();
      cfg["base"] = tower_subset.empty() ? "basepoint" : tower_subset;
      cfg["scale"] = eps;
      cfg["max_degree"] = tower_max_degree;
      cfg["ring"] = ring_name_s;
      cfg["r_grid"] = tp.r_grid;
      with_tower_field(ring, [&](auto tag) {
        using F = decltype(tag);
        Tower<F> T = build_complement_tower<F>(X, base, tp);
        emit(out_prefix, result_envelope("tower", cfg, space_to_json(X), tower_to_json(T), ts),
             tower_to_tsv(T));
        return 0;
      });
      return 0;
    }

    if (coarse_cmd->parsed()) {
      auto [X, pack] = coarse_space.load();
      CoarseParams cp;
      cp.profile_max_degree = coarse_max_degree;
      cp.stages = coarse_stages;
      cp.tower.eps = eps;
      cp.tower.ring = ring;
      cp.tower.threads = threads;
      OrderedJson cfg = coarse_space.config_json();
      cfg["scale"] = eps;
      cfg["max_degree"] = coarse_max_degree;
      cfg["ring"] = ring_name_s;
      cfg["stages"] = coarse_stages;
      with_tower_field(ring, [&](auto tag) {
        using F = decltype(tag);
        auto [prof, T] = coarse_cohomology_with_tower<F>(X, cp);
        std::string tsv = prof.bounded_case ? "" : tower_to_tsv(T);
        emit(out_prefix, result_envelope("coarse", cfg, space_to_json(X), profile_to_json(prof), ts),
             tsv);
        return 0;
      });
      return 0;
    }

    if (comp->parsed()) {
      auto [X, pack] = comp_space.load();
      Selection A = parse_subset(comp_subset, X, pack);
      CoarseParams cp;
      cp.profile_max_degree = comp_max_degree;
      cp.stages = comp_stages;
      cp.tower.eps = eps;
      cp.tower.ring = ring;
      cp.tower.threads = threads;
      OrderedJson cfg = comp_space.config_json();
      cfg["subset"] = comp_subset;
      cfg["scale"] = eps;
      cfg["max_degree"] = comp_max_degree;
      cfg["ring"] = ring_name_s;
      with_tower_field(ring, [&](auto tag) {
        using F = decltype(tag);
        auto [prof, T] = coarse_cohomology_of_complement_with_tower<F>(X, A, cp);
        emit(out_prefix,
             result_envelope("complement", cfg, space_to_json(X), profile_to_json(prof), ts),
             tower_to_tsv(T));
        return 0;
      });
      return 0;
    }

    if (da->parsed()) {
      auto [X, pack] = da_space.load();
      Selection A = parse_subset(da_subset, X, pack);
      CoarseParams cp;
      cp.stages = da_stages;
      cp.tower.eps = eps;
      cp.tower.ring = ring;
      cp.tower.threads = threads;
      OrderedJson cfg = da_space.config_json();
      cfg["subset"] = da_subset;
      cfg["scale"] = eps;
      cfg["ring"] = ring_name_s;
      int rc = with_tower_field(ring, [&](auto tag) {
        using F = decltype(tag);
        DAConsistencyReport rep = consistency_check_dA<F>(X, A, cp);
        emit(out_prefix,
             result_envelope("check-dA", cfg, space_to_json(X), da_report_to_json(rep), ts));
        return rep.pass ? 0 : 1;
      });
      return rc;
    }

    if (ac->parsed()) {
      auto [X, pack] = ac_space.load();
      ControlFunction mu = parse_control(ac_mu, pack);
      ControlFunction rho = parse_control(ac_rho, pack);
      AcyclicitySampleSpec spec;
      spec.num_radii = ac_radii;
      spec.centers_per_radius = ac_centers;
      spec.seed = seed;
      AcyclicityReport rep = check_acyclicity_at_infinity(X, mu, rho, spec, eps, ac_max_dim);
      OrderedJson cfg = ac_space.config_json();
      cfg["mu"] = ac_mu;
      cfg["rho"] = ac_rho;
      cfg["scale"] = eps;
      cfg["max_dim"] = ac_max_dim;
      cfg["seed"] = seed;
      emit(out_prefix, result_envelope("check-acyclic", cfg, space_to_json(X),
                                       acyclicity_report_to_json(rep), ts));
      return rep.pass ? 0 : 1;
    }

    if (fill->parsed()) {
      auto [X, pack] = fill_space.load();
      FarSubcomplexSpec spec = default_far_spec(X, fill_max_dim);
      FillingParams fp;
      fp.eps = eps;
      fp.max_dim = fill_max_dim;
      fp.audit_mode = fill_audit;
      fp.radius_cap_abs = fill_cap;
      FillingMap<GF2> M = filling_map_M<GF2>(X, spec, fp);
      OrderedJson result;
      OrderedJson counts = OrderedJson::array(), rho = OrderedJson::array();
      for (const auto& m : M.images) counts.push_back(m.size());
      for (double r : M.realized_rho) rho.push_back(r);
      result["generators_filled"] = std::move(counts);
      result["realized_rho"] = std::move(rho);
      result["chain_map"] = filling_is_chain_map(X, M);
      OrderedJson fails = OrderedJson::array();
      for (const auto& f : M.failures) {
        OrderedJson fj;
        fj["simplex"] = f.simplex;
        fj["radius_cap"] = f.radius_cap;
        fails.push_back(std::move(fj));
      }
      result["failures"] = std::move(fails);
      OrderedJson cfg = fill_space.config_json();
      cfg["scale"] = eps;
      cfg["max_dim"] = fill_max_dim;
      std::ostringstream tsv;
      tsv << "dim\tgenerators\trealized_rho\n";
      for (std::size_t n = 0; n < M.images.size(); ++n)
        tsv << n << '\t' << M.images[n].size() << '\t' << M.realized_rho[n] << '\n';
      emit(out_prefix, result_envelope("fill", cfg, space_to_json(X), result, ts), tsv.str());
      return 0;
    }

    if (vh->parsed()) {
      auto [X, pack] = vh_space.load();
      Rng rng(seed);
      int failures = 0;
      for (int trial = 0; trial < vh_count; ++trial) {
        std::vector<PointId> g(static_cast<std::size_t>(X.size()));
        for (PointId x = 0; x < X.size(); ++x) {
          std::vector<PointId> close;
          for (PointId y = 0; y < X.size(); ++y)
            if (approx_le(X.dist(x, y), vh_disp)) close.push_back(y);
          g[static_cast<std::size_t>(x)] = close[rng.below(close.size())];
        }
        auto run = [&](auto tag) {
          using F = decltype(tag);
          ConeHomotopy<F> D(X, vertex_chain_map<F>(X, g, vh_max_dim), vh_max_dim);
          for (int dim = 0; dim <= vh_max_dim; ++dim)
            for (int s = 0; s < vh_samples; ++s) {
              Tuple t;
              for (int k = 0; k <= dim; ++k)
                t.push_back(static_cast<PointId>(rng.below(X.size())));
              if (!D.homotopy_defect(t).zero() || !D.displacement_ok(t)) ++failures;
            }
        };
        if (ring == Ring::GF2) run(GF2());
        else run(Rational());
      }
      OrderedJson result;
      result["maps_checked"] = vh_count;
      result["failures"] = failures;
      OrderedJson cfg = vh_space.config_json();
      cfg["count"] = vh_count;
      cfg["seed"] = seed;
      cfg["ring"] = ring_name_s;
      emit(out_prefix, result_envelope("verify-homotopy", cfg, space_to_json(X), result, ts));
      return failures == 0 ? 0 : 1;
    }

    if (fc->parsed()) {
      auto [X, pack] = fc_space.load();
      auto groups = full_complex_cohomology(X, ring, fc_max_degree);
      OrderedJson result;
      result["groups"] = groups_to_json(groups);
      OrderedJson cfg = fc_space.config_json();
      cfg["ring"] = ring_name_s;
      cfg["max_degree"] = fc_max_degree;
      emit(out_prefix, result_envelope("full-cochain", cfg, space_to_json(X), result, ts),
           groups_to_tsv(groups));
      return 0;
    }

    std::cerr << "no subcommand" << std::endl;
    return 2;
  } catch (const BadInput& e) {
    std::cerr << "usage error: " << e.what() << std::endl;
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
}

}  // namespace coarse
