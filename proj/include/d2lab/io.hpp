#pragma once

#include <fstream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "d2lab/algebra.hpp"
#include "d2lab/characters.hpp"
#include "d2lab/cyclotomic.hpp"
#include "d2lab/errors.hpp"
#include "d2lab/perm_group.hpp"

namespace d2lab {

using json = nlohmann::ordered_json;

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

// ---- groups -----------------------------------------------------------------

/// S{n}, A{n}, C{n}, D{n} (dihedral of order 2n) and Q8.
inline GroupPtr group_from_name(const std::string& name, std::size_t cap) {
  if (name == "Q8") return quaternion8(cap);
  static const std::regex pattern("([SACD])([0-9]+)");
  std::smatch m;
  if (!std::regex_match(name, m, pattern)) throw ParseError("unknown group builder '" + name + "'");
  const auto n = static_cast<std::size_t>(std::stoul(m[2].str()));
  if (n == 0) throw ParseError("group builder needs a positive parameter: " + name);
  switch (m[1].str()[0]) {
    case 'S': return symmetric_group(n, cap);
    case 'A': return alternating_group(n, cap);
    case 'C': return cyclic_group(n, cap);
    default: return dihedral_group(n, cap);
  }
}

namespace detail {

inline std::vector<int> int_list(const json& j) {
  std::vector<int> out;
  for (const auto& x : j) {
    if (!x.is_number_integer()) throw ParseError("expected an integer in cycle, got " + x.dump());
    out.push_back(x.get<int>());
  }
  return out;
}

// A generator is either one cycle [0,1,2] or a list of cycles [[0,1],[2,3]].
inline Permutation permutation_from_json(const json& j, std::size_t degree) {
  if (!j.is_array()) throw ParseError("generator must be an array: " + j.dump());
  std::vector<std::vector<int>> cycles;
  if (!j.empty() && j[0].is_array()) {
    for (const auto& c : j) cycles.push_back(int_list(c));
  } else {
    cycles.push_back(int_list(j));
  }
  try {
    return Permutation::from_cycles(degree, cycles);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

}  // namespace detail

/// { "degree": n, "generators": [...] } with each generator a cycle or a list
/// of cycles.
inline GroupPtr group_from_json(const json& j, std::size_t cap) {
  if (!j.contains("degree") || !j.contains("generators")) throw ParseError("group file needs degree and generators");
  const auto degree = j.at("degree").get<std::size_t>();
  std::vector<Permutation> gens;
  for (const auto& g : j.at("generators")) gens.push_back(detail::permutation_from_json(g, degree));
  return make_group(degree, gens, cap);
}

/// Subgroup from cycle notation "(01),(23)" or from a JSON list of generator
/// indices (into the ambient generators) or explicit generators.
inline SubgroupEmbedding subgroup_from_text(const GroupPtr& g, const std::string& text) {
  std::vector<Permutation> gens;
  try {
    gens = parse_permutations(text, g->degree());
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
  for (const auto& p : gens)
    if (!g->contains(p)) throw ParseError("subgroup generator " + p.str() + " is not in the group");
  return make_embedding(g, gens);
}

inline SubgroupEmbedding subgroup_from_json(const GroupPtr& g, const json& j) {
  if (j.is_string()) return subgroup_from_text(g, j.get<std::string>());
  if (!j.is_array()) throw ParseError("subgroup must be a string or an array");
  std::vector<Permutation> gens;
  for (const auto& x : j) {
    if (x.is_number_integer()) {
      const auto i = x.get<std::size_t>();
      if (i >= g->generators().size()) throw ParseError("subgroup generator index out of range");
      gens.push_back(g->generators()[i]);
    } else {
      gens.push_back(detail::permutation_from_json(x, g->degree()));
    }
  }
  for (const auto& p : gens)
    if (!g->contains(p)) throw ParseError("subgroup generator " + p.str() + " is not in the group");
  return make_embedding(g, gens);
}

inline std::string generators_string(const PermGroup& h) {
  std::string s;
  for (const auto& p : h.generators()) {
    if (p.is_identity()) continue;
    if (!s.empty()) s += ",";
    s += p.str();
  }
  return s.empty() ? "()" : s;
}

// ---- scalars and algebras ---------------------------------------------------

template <ExactField F>
F scalar_from_json(const json& j) {
  try {
    if (j.is_number_integer()) return F(j.get<long>());
    if (j.is_string()) {
      if constexpr (std::is_same_v<F, Rational>) {
        return Rational::parse(j.get<std::string>());
      } else {
        return Cyclotomic::parse(j.get<std::string>());
      }
    }
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
  throw ParseError("expected an integer or a string scalar, got " + j.dump());
}

template <ExactField F>
Vec<F> vector_from_json(const json& j, std::size_t n) {
  if (!j.is_array() || j.size() != n) throw ParseError("expected a vector of length " + std::to_string(n));
  Vec<F> v;
  for (const auto& x : j) v.push_back(scalar_from_json<F>(x));
  return v;
}

/// Field of an algebra file: 1 for "Q", m for {"cyclotomic": m}.
inline std::size_t field_conductor(const json& j) {
  if (!j.contains("field")) return 1;
  const auto& f = j.at("field");
  if (f.is_string() && f.get<std::string>() == "Q") return 1;
  if (f.is_object() && f.contains("cyclotomic")) return f.at("cyclotomic").get<std::size_t>();
  throw ParseError("field must be \"Q\" or {\"cyclotomic\": m}");
}

/// { "dim": d, "structure": [...], "unit": [...], "subalgebra": [[...], ...] }.
/// The structure is either a flat list of d*d products (index i*d + j) or a
/// d x d nested list; each product is a list of [k, coefficient] pairs.
template <ExactField F>
AlgebraPtr<F> algebra_from_json(const json& j) {
  if (!j.contains("dim") || !j.contains("structure") || !j.contains("unit"))
    throw ParseError("algebra file needs dim, structure and unit");
  const auto d = j.at("dim").get<std::size_t>();
  const auto& st = j.at("structure");
  auto product_at = [&](std::size_t i, std::size_t k) -> const json& {
    if (st.size() == d * d) return st.at(i * d + k);
    if (st.size() == d && st.at(i).is_array() && st.at(i).size() == d) return st.at(i).at(k);
    throw ParseError("structure must have dim*dim entries");
  };
  std::vector<std::vector<SparseVec<F>>> table(d, std::vector<SparseVec<F>>(d));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < d; ++k) {
      Accumulator<F> acc;
      for (const auto& term : product_at(i, k)) {
        if (!term.is_array() || term.size() != 2) throw ParseError("product term must be [k, coefficient]");
        const auto idx = term.at(0).template get<std::size_t>();
        if (idx >= d) throw ParseError("basis index out of range in structure");
        add_entry(acc, static_cast<std::uint32_t>(idx), scalar_from_json<F>(term.at(1)));
      }
      table[i][k] = to_sparse(acc);
    }
  std::vector<std::string> labels;
  if (j.contains("labels")) {
    labels = j.at("labels").get<std::vector<std::string>>();
    if (labels.size() != d) throw ParseError("labels must have dim entries");
  } else {
    for (std::size_t i = 0; i < d; ++i) labels.push_back("x" + std::to_string(i));
  }
  return std::make_shared<const FDAlgebra<F>>(std::move(labels), std::move(table), vector_from_json<F>(j.at("unit"), d));
}

template <ExactField F>
std::vector<Vec<F>> subalgebra_from_json(const json& j, std::size_t n) {
  std::vector<Vec<F>> out;
  for (const auto& v : j) out.push_back(vector_from_json<F>(v, n));
  return out;
}

/// matrix{n}, triangular{n}, product{n} (or product with n given separately),
/// truncated{k}.
template <ExactField F>
AlgebraPtr<F> algebra_from_name(const std::string& name, std::size_t n_param) {
  static const std::regex pattern("(matrix|triangular|product|truncated)([0-9]*)");
  std::smatch m;
  if (!std::regex_match(name, m, pattern)) throw ParseError("unknown algebra builder '" + name + "'");
  std::size_t n = n_param;
  if (!m[2].str().empty()) n = std::stoul(m[2].str());
  if (n == 0) throw ParseError("algebra builder " + name + " needs a size (suffix or --n)");
  const auto kind = m[1].str();
  if (kind == "matrix") return matrix_algebra<F>(n);
  if (kind == "triangular") return triangular_algebra<F>(n);
  if (kind == "product") return product_algebra<F>(n);
  return truncated_polynomial_algebra<F>(n);
}

/// scalars, whole, diagonal, or span:<JSON list of vectors>.
template <ExactField F>
std::vector<Vec<F>> subalgebra_from_name(const FDAlgebra<F>& a, const std::string& name) {
  if (name == "scalars") return scalars_subalgebra(a);
  if (name == "whole") return whole_subalgebra(a);
  if (name == "diagonal") {
    auto d = diagonal_subalgebra(a);
    if (d.empty()) throw ParseError("algebra has no diagonal matrix units");
    return d;
  }
  if (name.rfind("span:", 0) == 0) {
    try {
      return subalgebra_from_json<F>(json::parse(name.substr(5)), a.dim());
    } catch (const json::exception& e) {
      throw ParseError(e.what());
    }
  }
  throw ParseError("unknown subalgebra '" + name + "'");
}

// ---- tables -----------------------------------------------------------------

inline json character_table_json(const CharacterTable& t) {
  const auto& g = *t.group;
  json classes = json::array();
  for (const auto& c : g.classes())
    classes.push_back({{"representative", g.element(c.representative).str()}, {"size", c.members.size()}});
  json irr = json::array();
  for (const auto& chi : t.irreducibles) {
    json row = json::array();
    for (const auto& v : chi.values) row.push_back(v.str());
    irr.push_back(row);
  }
  return {{"classes", classes}, {"irreducibles", irr}};
}

// ---- text rendering ---------------------------------------------------------

namespace detail {

inline bool is_flat_array(const json& j) {
  if (!j.is_array()) return false;
  for (const auto& x : j)
    if (x.is_structured()) return false;
  return true;
}

inline std::string scalar_text(const json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_null()) return "-";
  return j.dump();
}

inline std::string flat_text(const json& j) {
  std::string s = "[";
  for (std::size_t i = 0; i < j.size(); ++i) s += (i ? ", " : "") + scalar_text(j[i]);
  return s + "]";
}

inline void render(std::ostringstream& os, const json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      if (v.is_structured() && !is_flat_array(v)) {
        os << pad << k << ":\n";
        render(os, v, indent + 1);
      } else {
        os << pad << k << ": " << (v.is_array() ? flat_text(v) : scalar_text(v)) << "\n";
      }
    }
  } else if (j.is_array()) {
    for (const auto& v : j) {
      if (v.is_object()) {
        os << pad << "-\n";
        render(os, v, indent + 1);
      } else if (is_flat_array(v)) {
        os << pad << flat_text(v) << "\n";
      } else if (v.is_array()) {
        os << pad << "-\n";
        render(os, v, indent + 1);
      } else {
        os << pad << scalar_text(v) << "\n";
      }
    }
  } else {
    os << pad << scalar_text(j) << "\n";
  }
}

}  // namespace detail

/// Indented plain-text rendering of a report; carries exactly the JSON content.
inline std::string render_text(const json& j) {
  std::ostringstream os;
  detail::render(os, j, 0);
  return os.str();
}

}  // namespace d2lab
