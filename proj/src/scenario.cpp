#include "imcf/scenario.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "imcf/oracles.hpp"
#include "imcf/smallmat.hpp"

namespace imcf {

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

struct RawEntry {
  std::string value;
  int line;
};

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

struct Parser {
  std::map<std::string, RawEntry> kv;  // "section.key" -> value
  std::vector<ScenarioIssue> issues;

  void parse_error(int line, const std::string& msg) { issues.push_back({line, "", msg}); }
  void invalid(const std::string& field, const std::string& msg) {
    issues.push_back({0, field, msg});
  }

  bool has(const std::string& key) const { return kv.count(key) > 0; }

  std::string str_required(const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) {
      invalid(key, "required key is missing");
      return "";
    }
    return it->second.value;
  }

  double num_required(const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) {
      invalid(key, "required key is missing");
      return 0.0;
    }
    try {
      std::size_t used = 0;
      double v = std::stod(it->second.value, &used);
      if (used != it->second.value.size()) throw std::invalid_argument("trailing");
      return v;
    } catch (...) {
      parse_error(it->second.line, "not a number: " + it->second.value);
      return 0.0;
    }
  }

  double num_optional(const std::string& key, double fallback) {
    return has(key) ? num_required(key) : fallback;
  }

  std::uint64_t uint_required(const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) {
      invalid(key, "required key is missing");
      return 0;
    }
    try {
      std::size_t used = 0;
      unsigned long long v = std::stoull(it->second.value, &used);
      if (used != it->second.value.size()) throw std::invalid_argument("trailing");
      return v;
    } catch (...) {
      parse_error(it->second.line, "not an unsigned integer: " + it->second.value);
      return 0;
    }
  }
};

}  // namespace

ScenarioParse parse_scenario(const std::string& text) {
  Parser P;
  {
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      std::string t = trim(line);
      if (t.empty() || t[0] == '#') continue;
      if (t.front() == '[') {
        if (t.back() != ']') {
          P.parse_error(lineno, "unterminated section header");
          continue;
        }
        section = trim(t.substr(1, t.size() - 2));
        if (section != "domain" && section != "seed" && section != "flow" &&
            section != "step" && section != "output")
          P.parse_error(lineno, "unknown section [" + section + "]");
        continue;
      }
      std::size_t eq = t.find('=');
      if (eq == std::string::npos) {
        P.parse_error(lineno, "expected key = value");
        continue;
      }
      std::string key = trim(t.substr(0, eq));
      std::string val = trim(t.substr(eq + 1));
      if (key.empty()) {
        P.parse_error(lineno, "empty key");
        continue;
      }
      std::string full = section.empty() ? key : section + "." + key;
      if (P.kv.count(full)) P.parse_error(lineno, "duplicate key " + full);
      P.kv[full] = {val, lineno};
    }
  }

  Scenario sc;
  sc.source_text = text;
  sc.content_hash = fnv1a64(text);

  sc.name = P.str_required("name");
  if (sc.name.empty() && P.has("name")) P.invalid("name", "must not be empty");

  // domain
  std::string kind = P.str_required("domain.kind");
  int n = static_cast<int>(P.num_required("domain.n"));
  if (n < 2) P.invalid("domain.n", "dimension must be >= 2");
  int stencil = static_cast<int>(P.num_optional("domain.stencil_order", 2));
  if (stencil != 2 && stencil != 4) P.invalid("domain.stencil_order", "must be 2 or 4");
  int interp = static_cast<int>(P.num_optional("domain.interp_order", 2));
  if (interp != 2 && interp != 3) P.invalid("domain.interp_order", "must be 2 or 3");

  DomainKind parsed_kind = DomainKind::Homogeneous;
  bool kind_known = kind == "homogeneous" || kind == "torus" || kind == "patch";
  if (kind == "torus") parsed_kind = DomainKind::Torus;
  if (kind == "patch") parsed_kind = DomainKind::Patch;
  if (kind == "homogeneous") {
    if (n >= 2) {
      sc.domain = DomainSpec::homogeneous(n);
    }
  } else if (kind == "torus") {
    int pts = static_cast<int>(P.num_required("domain.points"));
    double extent = P.num_required("domain.extent");
    if (pts < 4) P.invalid("domain.points", "per-axis point count must be >= 4");
    if (!(extent > 0.0)) P.invalid("domain.extent", "must be positive");
    if (n >= 2 && pts >= 4 && extent > 0.0) {
      sc.domain = DomainSpec::torus(n, pts, extent);
    }
  } else if (kind == "patch") {
    int pts = static_cast<int>(P.num_required("domain.points"));
    double radius = P.num_required("domain.radius");
    std::string bnd = P.str_required("domain.boundary");
    BoundaryPolicy bp = BoundaryPolicy::Frozen;
    if (bnd == "oracle")
      bp = BoundaryPolicy::DirichletFromOracle;
    else if (bnd == "frozen")
      bp = BoundaryPolicy::Frozen;
    else if (P.has("domain.boundary"))
      P.invalid("domain.boundary", "must be oracle or frozen");
    if (pts < 4) P.invalid("domain.points", "per-axis point count must be >= 4");
    if (!(radius > 0.0) || radius > 0.7)
      P.invalid("domain.radius", "chart radius must lie in (0, 0.7]");
    if (n >= 2 && pts >= 4 && radius > 0.0 && radius <= 0.7) {
      sc.ball_radius = radius;
      sc.domain = DomainSpec::patch(n, pts, radius / std::sqrt(static_cast<double>(n)), bp);
    }
  } else if (P.has("domain.kind")) {
    P.invalid("domain.kind", "must be homogeneous, torus or patch");
  }
  sc.domain.stencil_order = stencil;
  sc.domain.interp_order = interp;

  // seed family
  std::string family = P.str_required("seed.family");
  if (family == "umbilic") {
    sc.family = SeedFamily::Umbilic;
    sc.lambda0 = P.num_required("seed.lambda0");
    if (P.has("seed.lambda0") && !(sc.lambda0 > 0.0))
      P.invalid("seed.lambda0", "must be positive");
    if (kind_known && parsed_kind == DomainKind::Torus)
      P.invalid("seed.family", "umbilic seed requires a homogeneous or patch domain");
  } else if (family == "hyperboloid-perturbed") {
    sc.family = SeedFamily::HyperboloidPerturbed;
    sc.lambda0 = P.num_required("seed.lambda0");
    sc.delta = P.num_required("seed.delta");
    sc.seed = P.uint_required("seed.seed");
    if (P.has("seed.lambda0") && !(sc.lambda0 > 0.0))
      P.invalid("seed.lambda0", "must be positive");
    if (kind_known && parsed_kind != DomainKind::Patch)
      P.invalid("seed.family", "hyperboloid-perturbed seed requires a patch domain");
  } else if (family == "torus-random") {
    sc.family = SeedFamily::TorusRandom;
    sc.amplitude = P.num_required("seed.amplitude");
    sc.seed = P.uint_required("seed.seed");
    if (kind_known && parsed_kind != DomainKind::Torus)
      P.invalid("seed.family", "torus-random seed requires a torus domain");
  } else if (P.has("seed.family")) {
    P.invalid("seed.family", "must be umbilic, hyperboloid-perturbed or torus-random");
  }
  sc.normalize_A = P.num_optional("seed.normalize_A", 0.0);
  if (sc.normalize_A < 0.0) P.invalid("seed.normalize_A", "must be non-negative");
  sc.h_scale = P.num_optional("seed.h_scale", 1.0);
  if (sc.h_scale < 0.0) P.invalid("seed.h_scale", "must be non-negative");
  sc.rough_amplitude = P.num_optional("seed.rough_amplitude", 0.0);
  sc.rough_mode = static_cast<int>(P.num_optional("seed.rough_mode", 0));
  if ((sc.rough_amplitude != 0.0 || sc.rough_mode != 0) && sc.family != SeedFamily::TorusRandom)
    P.invalid("seed.rough_amplitude", "rough modes apply to torus-random seeds only");
  if (sc.rough_amplitude < 0.0 || sc.rough_amplitude >= 1.0)
    P.invalid("seed.rough_amplitude", "must lie in [0, 1)");

  // flow variant
  std::string variant = P.str_required("flow.variant");
  if (variant == "raw")
    sc.variant = FlowVariant::Raw;
  else if (variant == "simplified")
    sc.variant = FlowVariant::Simplified;
  else if (variant == "gauge-fixed")
    sc.variant = FlowVariant::GaugeFixed;
  else if (P.has("flow.variant"))
    P.invalid("flow.variant", "must be raw, simplified or gauge-fixed");

  // stepping
  std::string method = P.str_required("step.method");
  if (method == "euler")
    sc.step.method = StepMethod::Euler;
  else if (method == "rk4")
    sc.step.method = StepMethod::RK4;
  else if (P.has("step.method"))
    P.invalid("step.method", "must be euler or rk4");
  sc.step.cfl = P.num_required("step.cfl");
  if (P.has("step.cfl") && (!(sc.step.cfl > 0.0) || sc.step.cfl > 1.0))
    P.invalid("step.cfl", "must lie in (0, 1]");
  sc.step.dt_max = P.num_required("step.dt_max");
  if (P.has("step.dt_max") && !(sc.step.dt_max > 0.0)) P.invalid("step.dt_max", "must be positive");
  sc.step.t_end = P.num_required("step.t_end");
  if (P.has("step.t_end") && !(sc.step.t_end > 0.0)) P.invalid("step.t_end", "must be positive");
  sc.step.record_every = static_cast<int>(P.num_optional("step.record_every", 1));
  if (sc.step.record_every < 1) P.invalid("step.record_every", "must be >= 1");
  sc.step.checkpoint_every = static_cast<long>(P.num_optional("step.checkpoint_every", 0));
  if (sc.step.checkpoint_every < 0) P.invalid("step.checkpoint_every", "must be >= 0");

  if (P.has("output.directory")) sc.output_dir = P.kv["output.directory"].value;

  ScenarioParse out;
  out.issues = std::move(P.issues);
  if (out.issues.empty()) out.scenario = std::move(sc);
  return out;
}

ScenarioParse parse_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    ScenarioParse bad;
    bad.issues.push_back({0, "", "cannot open scenario file: " + path});
    return bad;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

SpacelikeState build_initial_state(const Scenario& sc) {
  SpacelikeState st;
  switch (sc.family) {
    case SeedFamily::Umbilic:
      st = (sc.domain.kind == DomainKind::Homogeneous)
               ? UmbilicSolution::homogeneous(sc.domain.n, sc.lambda0).state(0.0)
               : UmbilicSolution::patch(sc.domain, sc.lambda0).state(0.0);
      break;
    case SeedFamily::HyperboloidPerturbed: {
      st = UmbilicSolution::patch(sc.domain, sc.lambda0).state(0.0);
      Sym2Field P = seeded_perturbation(sc.domain, sc.delta, sc.seed);
      for (std::size_t i = 0; i < st.h.raw().size(); ++i) st.h.raw()[i] += P.raw()[i];
      break;
    }
    case SeedFamily::TorusRandom: {
      st = torus_random_state(sc.domain, sc.amplitude, sc.seed);
      if (sc.h_scale != 1.0)
        for (auto& v : st.h.raw()) v *= sc.h_scale;
      if (sc.rough_amplitude > 0.0 && sc.rough_mode > 0) {
        double A = sc.rough_amplitude;
        double x[kMaxDim];
        for (std::size_t p = 0; p < st.g.npoints(); ++p) {
          sc.domain.point_coords(p, x);
          double s1 = std::sin(2.0 * M_PI * sc.rough_mode * x[0] / sc.domain.period(0));
          double c2 = std::cos(2.0 * M_PI * sc.rough_mode * x[1] / sc.domain.period(1));
          st.g(p, 0, 0) += A * s1 * c2;
          st.g(p, 1, 1) -= A * s1;
          st.g(p, 0, 1) += 0.25 * A * c2;
        }
      }
      break;
    }
  }
  if (sc.normalize_A > 0.0) {
    Sym2Field ginv = inverse_metric(st.g);
    ScalarField A2 = norm_A2(st.h, ginv);
    double a2max = 0.0;
    for (std::size_t p = 0; p < A2.npoints(); ++p) a2max = std::max(a2max, A2(p));
    double scale = sc.normalize_A / std::sqrt(a2max);
    for (auto& v : st.h.raw()) v *= scale;
  }
  return st;
}

BoundaryCondition build_boundary(const Scenario& sc) {
  if (sc.domain.kind != DomainKind::Patch) return {};
  if (sc.domain.boundary == BoundaryPolicy::Frozen)
    return BoundaryCondition::frozen(sc.domain);

  // Dirichlet rows from the exact derivative of the unperturbed umbilic
  // family (the perturbation families vanish near the boundary).
  UmbilicSolution sol = UmbilicSolution::patch(sc.domain, sc.lambda0);
  DomainSpec dom = sc.domain;
  BoundaryCondition bc;
  bc.impose = [sol = std::move(sol), dom](double t, Sym2Field& dg, Sym2Field& dh) {
    double a = 2.0 * sol.n * sol.lambda0 * sol.lambda0;
    double b = sol.n * sol.lambda0 * sol.lambda0 * sol.lambda0 / std::sqrt(sol.scale(t));
    for (std::size_t p = 0; p < dg.npoints(); ++p) {
      if (!dom.on_boundary(p)) continue;
      for (int c = 0; c < dg.ncomp(); ++c) {
        dg.comp(c)[p] = a * sol.g0.comp(c)[p];
        dh.comp(c)[p] = b * sol.g0.comp(c)[p];
      }
    }
  };
  return bc;
}

std::optional<GaugeData> build_gauge(const Scenario& sc, const SpacelikeState& st0) {
  if (sc.variant != FlowVariant::GaugeFixed) return std::nullopt;
  GaugeData gd;
  gd.s = st0.g;
  gd.F = VectorField(sc.domain);
  double x[kMaxDim];
  for (std::size_t p = 0; p < gd.F.npoints(); ++p) {
    sc.domain.point_coords(p, x);
    for (int a = 0; a < sc.domain.n; ++a) gd.F(p, a) = x[a];
  }
  return gd;
}

}  // namespace imcf
