#include "rmap/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace rmap {

const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> names = {
      "almost_hermitian",
      "kahler",
      "constant_rank",
      "riemannian_map",
      "anti_invariant",
      "dimension_identities",
      "totally_geodesic",
      "umbilical_fibers",
      "range_perpendicularity",
      "vertical_foliation",
      "horizontal_foliation",
      "product_decomposition",
      "totally_geodesic_criteria",
      "umbilical_implies_geodesic",
      "pluriharmonic",
      "pluriharmonic_implies_geodesic",
  };
  return names;
}

const ManifoldSpec* Scenario::find_manifold(const std::string& n) const {
  for (const auto& m : manifolds)
    if (m->name() == n) return m.get();
  return nullptr;
}

const MapSpec* Scenario::find_map(const std::string& n) const {
  for (const auto& f : maps)
    if (f->name == n) return f.get();
  return nullptr;
}

const MapSpec* Scenario::active_map() const {
  return map_name.empty() ? nullptr : find_map(map_name);
}

const ManifoldSpec* Scenario::active_manifold() const {
  if (const MapSpec* F = active_map()) return F->source;
  return manifold_name.empty() ? nullptr : find_manifold(manifold_name);
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

// Split on commas outside parentheses (map components are expressions
// that may contain parenthesized subterms, but all functions are unary,
// so top-level commas only separate components).
std::vector<std::string> split_components(const std::string& s, int line) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') {
      --depth;
      if (depth < 0) throw ScenarioError("unbalanced ')' in component list", line);
    }
    if (c == ',' && depth == 0) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (depth != 0) throw ScenarioError("unbalanced '(' in component list", line);
  out.push_back(trim(cur));
  return out;
}

double parse_double(const std::string& s, int line) {
  double v = 0.0;
  const char* b = s.data();
  auto [p, ec] = std::from_chars(b, b + s.size(), v);
  if (ec != std::errc() || p != b + s.size())
    throw ScenarioError("malformed number '" + s + "'", line);
  return v;
}

long parse_long(const std::string& s, int line) {
  long v = 0;
  const char* b = s.data();
  auto [p, ec] = std::from_chars(b, b + s.size(), v);
  if (ec != std::errc() || p != b + s.size())
    throw ScenarioError("malformed integer '" + s + "'", line);
  return v;
}

Eigen::VectorXd parse_vector(const std::string& s, int line) {
  std::vector<double> vals;
  for (const std::string& tok : split(s, ' '))
    if (!tok.empty()) vals.push_back(parse_double(tok, line));
  Eigen::VectorXd v(static_cast<int>(vals.size()));
  for (std::size_t i = 0; i < vals.size(); ++i) v[static_cast<int>(i)] = vals[i];
  return v;
}

std::vector<Eigen::VectorXd> parse_vector_list(const std::string& s, int line) {
  std::vector<Eigen::VectorXd> out;
  for (const std::string& part : split(s, ';'))
    if (!part.empty()) out.push_back(parse_vector(part, line));
  return out;
}

// Raw key/value pairs of one section, kept in file order.
struct Section {
  std::string header;  // e.g. "manifold R4"
  int line = 0;
  std::vector<std::tuple<std::string, std::string, int>> entries;  // key, value, line
};

struct PendingManifold {
  std::string name;
  int line = 0;
  int dim = 0;
  std::vector<std::string> coords;
  bool identity_metric = false;
  bool canonical_J = false;
  std::vector<std::tuple<int, int, std::string, int>> metric_entries;  // i, j, expr, line
  std::vector<std::tuple<int, int, std::string, int>> J_entries;
};

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& fallback_name) {
  std::vector<Section> sections;
  {
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
      ++lineno;
      std::string stripped = raw;
      const auto hash = stripped.find('#');
      if (hash != std::string::npos) stripped = stripped.substr(0, hash);
      stripped = trim(stripped);
      if (stripped.empty()) continue;
      if (stripped.front() == '[') {
        if (stripped.back() != ']') throw ScenarioError("expected ']' at end of header", lineno);
        sections.push_back({trim(stripped.substr(1, stripped.size() - 2)), lineno, {}});
        continue;
      }
      const auto eq = stripped.find('=');
      if (eq == std::string::npos) throw ScenarioError("expected 'key = value'", lineno);
      if (sections.empty()) throw ScenarioError("entry before any section header", lineno);
      sections.back().entries.emplace_back(trim(stripped.substr(0, eq)),
                                           trim(stripped.substr(eq + 1)), lineno);
    }
  }

  Scenario sc;
  sc.name = fallback_name;
  std::vector<PendingManifold> pending;
  std::vector<std::tuple<std::string, std::string, std::string, std::string, int>>
      pending_maps;  // name, source, target, components, line
  const Section* verify = nullptr;

  for (const Section& sec : sections) {
    std::istringstream hs(sec.header);
    std::string kind, name;
    hs >> kind >> name;
    if (kind == "manifold") {
      if (name.empty()) throw ScenarioError("manifold section needs a name", sec.line);
      PendingManifold pm;
      pm.name = name;
      pm.line = sec.line;
      for (const auto& [key, value, line] : sec.entries) {
        std::istringstream ks(key);
        std::string head;
        ks >> head;
        if (head == "dim") {
          pm.dim = static_cast<int>(parse_long(value, line));
        } else if (head == "coords") {
          for (const std::string& c : split(value, ','))
            for (const std::string& c2 : split(c, ' '))
              if (!c2.empty()) pm.coords.push_back(c2);
        } else if (head == "metric") {
          if (value != "identity")
            throw ScenarioError("metric = identity, or per-entry 'g i j = <expr>'", line);
          pm.identity_metric = true;
        } else if (head == "g") {
          int i = 0, j = 0;
          if (!(ks >> i >> j)) throw ScenarioError("metric entry needs 'g i j = <expr>'", line);
          pm.metric_entries.emplace_back(i - 1, j - 1, value, line);
        } else if (head == "J") {
          int i = 0, j = 0;
          if (ks >> i) {
            if (!(ks >> j)) throw ScenarioError("'J i j = <expr>' needs two indices", line);
            pm.J_entries.emplace_back(i - 1, j - 1, value, line);
          } else if (value == "canonical") {
            pm.canonical_J = true;
          } else {
            throw ScenarioError("J = canonical, or per-entry 'J i j = <expr>'", line);
          }
        } else {
          throw ScenarioError("unknown manifold key '" + key + "'", line);
        }
      }
      pending.push_back(std::move(pm));
    } else if (kind == "map") {
      if (name.empty()) throw ScenarioError("map section needs a name", sec.line);
      std::string source, target, components;
      for (const auto& [key, value, line] : sec.entries) {
        if (key == "source") {
          source = value;
        } else if (key == "target") {
          target = value;
        } else if (key == "components") {
          components = value;
        } else {
          throw ScenarioError("unknown map key '" + key + "'", line);
        }
      }
      pending_maps.emplace_back(name, source, target, components, sec.line);
    } else if (kind == "verify") {
      if (verify) throw ScenarioError("duplicate [verify] section", sec.line);
      verify = &sec;
    } else {
      throw ScenarioError("unknown section '" + sec.header + "'", sec.line);
    }
  }

  // Build manifolds.
  for (PendingManifold& pm : pending) {
    if (pm.dim <= 0) throw ScenarioError("manifold " + pm.name + " needs dim > 0", pm.line);
    if (!pm.coords.empty() && static_cast<int>(pm.coords.size()) != pm.dim)
      throw ScenarioError("manifold " + pm.name + " has " + std::to_string(pm.coords.size()) +
                              " coords for dim " + std::to_string(pm.dim),
                          pm.line);
    auto M = std::make_unique<ManifoldSpec>(pm.name, pm.dim, pm.coords);
    if (pm.identity_metric) {
      if (!pm.metric_entries.empty())
        throw ScenarioError("manifold " + pm.name + " mixes identity metric with entries",
                            pm.line);
      M->set_identity_metric();
    } else {
      if (pm.metric_entries.empty())
        throw ScenarioError("manifold " + pm.name + " has no metric", pm.line);
      // unset entries default to 0 off-diagonal; diagonal must be given
      std::vector<bool> given(static_cast<std::size_t>(pm.dim) * pm.dim, false);
      for (auto& [i, j, expr, line] : pm.metric_entries) {
        if (i < 0 || j < 0 || i >= pm.dim || j >= pm.dim)
          throw ScenarioError("metric index out of range (indices are 1-based)", line);
        try {
          M->set_metric_entry(i, j, parse_expression(expr, M->coords()));
        } catch (const ParseError& e) {
          throw ScenarioError(std::string("in metric entry: ") + e.what(), line);
        }
        given[static_cast<std::size_t>(std::min(i, j)) * pm.dim + std::max(i, j)] = true;
      }
      for (int i = 0; i < pm.dim; ++i) {
        if (!given[static_cast<std::size_t>(i) * pm.dim + i])
          throw ScenarioError("manifold " + pm.name + " misses diagonal metric entry g " +
                                  std::to_string(i + 1) + " " + std::to_string(i + 1),
                              pm.line);
        for (int j = i + 1; j < pm.dim; ++j)
          if (!given[static_cast<std::size_t>(i) * pm.dim + j])
            M->set_metric_entry(i, j, Expression::constant(0.0));
      }
    }
    if (pm.canonical_J) {
      if (!pm.J_entries.empty())
        throw ScenarioError("manifold " + pm.name + " mixes canonical J with entries", pm.line);
      if (pm.dim % 2 != 0)
        throw ScenarioError("canonical J needs even dimension", pm.line);
      M->set_canonical_complex_structure();
    } else if (!pm.J_entries.empty()) {
      if (pm.dim % 2 != 0)
        throw ScenarioError("complex structure needs even dimension", pm.line);
      for (auto& [i, j, expr, line] : pm.J_entries) {
        if (i < 0 || j < 0 || i >= pm.dim || j >= pm.dim)
          throw ScenarioError("J index out of range (indices are 1-based)", line);
        try {
          M->set_complex_structure_entry(i, j, parse_expression(expr, M->coords()));
        } catch (const ParseError& e) {
          throw ScenarioError(std::string("in J entry: ") + e.what(), line);
        }
      }
    }
    sc.manifolds.push_back(std::move(M));
  }

  // Build maps.
  for (auto& [name, source, target, components, line] : pending_maps) {
    const ManifoldSpec* src = sc.find_manifold(source);
    const ManifoldSpec* tgt = sc.find_manifold(target);
    if (!src)
      throw ScenarioError("map " + name + " references undeclared manifold '" + source + "'",
                          line);
    if (!tgt)
      throw ScenarioError("map " + name + " references undeclared manifold '" + target + "'",
                          line);
    auto F = std::make_unique<MapSpec>();
    F->name = name;
    F->source = src;
    F->target = tgt;
    const std::vector<std::string> comps = split_components(components, line);
    if (static_cast<int>(comps.size()) != tgt->dim())
      throw ScenarioError("map " + name + " has " + std::to_string(comps.size()) +
                              " components for target dim " + std::to_string(tgt->dim()),
                          line);
    for (const std::string& c : comps) {
      try {
        F->components.push_back(parse_expression(c, src->coords()));
      } catch (const ParseError& e) {
        throw ScenarioError(std::string("in map component: ") + e.what(), line);
      }
    }
    F->validate();
    sc.maps.push_back(std::move(F));
  }

  if (!verify) throw ScenarioError("missing [verify] section", 0);
  for (const auto& [key, value, line] : verify->entries) {
    std::istringstream ks(key);
    std::string head;
    ks >> head;
    if (head == "name") {
      sc.name = value;
    } else if (head == "map") {
      sc.map_name = value;
    } else if (head == "manifold") {
      sc.manifold_name = value;
    } else if (head == "sampling") {
      if (value == "grid") {
        sc.sampling = SamplingStrategy::Grid;
      } else if (value == "random") {
        sc.sampling = SamplingStrategy::UniformRandom;
      } else if (value == "explicit") {
        sc.sampling = SamplingStrategy::Explicit;
      } else {
        throw ScenarioError("sampling must be grid | random | explicit", line);
      }
    } else if (head == "region") {
      sc.region.clear();
      for (const std::string& part : split(value, ';')) {
        const Eigen::VectorXd iv = parse_vector(part, line);
        if (iv.size() != 2) throw ScenarioError("region interval needs 'lo hi'", line);
        if (!(iv[0] <= iv[1])) throw ScenarioError("region interval has lo > hi", line);
        sc.region.emplace_back(iv[0], iv[1]);
      }
    } else if (head == "count") {
      sc.count = static_cast<int>(parse_long(value, line));
      if (sc.count < 1) throw ScenarioError("count must be >= 1", line);
    } else if (head == "seed") {
      sc.seed = static_cast<std::uint64_t>(parse_long(value, line));
    } else if (head == "checks") {
      sc.checks.clear();
      for (const std::string& c : split(value, ','))
        if (!c.empty()) sc.checks.push_back(c);
    } else if (head == "tolerance") {
      std::string which;
      ks >> which;
      if (which.empty()) throw ScenarioError("'tolerance <check> = value'", line);
      sc.tolerance_overrides[which] = parse_double(value, line);
    } else if (head == "points") {
      sc.explicit_points = parse_vector_list(value, line);
    } else if (head == "test_vertical") {
      sc.test_vertical = parse_vector_list(value, line);
    } else if (head == "test_frame") {
      sc.test_frame = parse_vector_list(value, line);
    } else {
      throw ScenarioError("unknown verify key '" + key + "'", line);
    }
  }

  // Resolution and dimension validation.
  if (!sc.map_name.empty() && !sc.find_map(sc.map_name))
    throw ScenarioError("verify references undeclared map '" + sc.map_name + "'", verify->line);
  if (!sc.manifold_name.empty() && !sc.find_manifold(sc.manifold_name))
    throw ScenarioError("verify references undeclared manifold '" + sc.manifold_name + "'",
                        verify->line);
  if (sc.map_name.empty() && sc.manifold_name.empty())
    throw ScenarioError("verify needs 'map = <name>' or 'manifold = <name>'", verify->line);
  const ManifoldSpec* domain = sc.active_manifold();
  const int m = domain->dim();
  if (sc.region.empty()) {
    sc.region.assign(m, {-1.0, 1.0});
  } else if (static_cast<int>(sc.region.size()) != m) {
    throw ScenarioError("region has " + std::to_string(sc.region.size()) +
                            " intervals for dimension " + std::to_string(m),
                        verify->line);
  }
  if (sc.sampling == SamplingStrategy::Explicit && sc.explicit_points.empty())
    throw ScenarioError("explicit sampling needs 'points = ...'", verify->line);
  for (const Eigen::VectorXd& p : sc.explicit_points)
    if (p.size() != m)
      throw ScenarioError("explicit point dimension mismatch", verify->line);
  for (const Eigen::VectorXd& v : sc.test_vertical)
    if (v.size() != m) throw ScenarioError("test_vertical dimension mismatch", verify->line);
  for (const Eigen::VectorXd& v : sc.test_frame)
    if (v.size() != m) throw ScenarioError("test_frame dimension mismatch", verify->line);
  for (const std::string& c : sc.checks) {
    if (c == "all") continue;
    const auto& kc = known_checks();
    if (std::find(kc.begin(), kc.end(), c) == kc.end())
      throw ScenarioError("unknown check '" + c + "'", verify->line);
  }
  for (const auto& [which, tol] : sc.tolerance_overrides) {
    const auto& kc = known_checks();
    if (std::find(kc.begin(), kc.end(), which) == kc.end())
      throw ScenarioError("tolerance override for unknown check '" + which + "'", verify->line);
    if (!(tol > 0.0)) throw ScenarioError("tolerance must be positive", verify->line);
  }
  return sc;
}

}  // namespace rmap
