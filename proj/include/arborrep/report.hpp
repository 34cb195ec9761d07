#pragma once

#include <json.hpp>

#include <algorithm>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "arborrep/chartab.hpp"
#include "arborrep/errors.hpp"
#include "arborrep/families.hpp"
#include "arborrep/level_action.hpp"
#include "arborrep/stab_chain.hpp"
#include "arborrep/transitivity.hpp"
#include "arborrep/tree.hpp"
#include "arborrep/tree_group.hpp"
#include "arborrep/zeta.hpp"

namespace arborrep {

/// JSON flavor used throughout the reporting layer. Insertion order is
/// preserved so that reports serialize byte-identically across runs.
using Json = nlohmann::ordered_json;

/// An analysis request that fails validation before any computation starts.
struct SpecError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Analyses the report runner knows how to perform, in report order.
inline const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> names{"transitivity", "gelfand", "decompose", "order",
                                              "zeta"};
  return names;
}

/// Validated description of a group to analyze: the family with its
/// parameters, the truncation depth, the analysis selection, and capacity
/// overrides. The effective spec is kept as JSON for echoing into reports.
struct GroupSpec {
  std::string family;
  int depth = 0;

  std::optional<DefiningVector> vector;                 // ggs, dihedral_binary
  std::vector<std::vector<Permutation>> wreath_labels;  // iterated_wreath
  bool repeat_last = false;
  int prime = 0;  // gl_congruence
  int dimension = 0;
  RingKind ring = RingKind::padic;
  std::optional<Automaton> machine;  // automaton
  std::vector<std::string> generator_states;

  std::set<std::string> checks;  // empty selects every known check
  unsigned long long cap_enum = kCharTableOrderCap;
  unsigned long long cap_level = kDefaultPairCellCap;

  Json raw;  // effective spec, echoed into reports

  bool wants(const std::string& check) const {
    return checks.empty() || checks.count(check) > 0;
  }
};

namespace detail {

[[noreturn]] inline void spec_fail(const std::string& path, const std::string& message) {
  throw SpecError("spec error at " + path + ": " + message);
}

inline void check_keys(const Json& j, const std::string& path,
                       const std::set<std::string>& allowed) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) spec_fail(path + "." + it.key(), "unknown field");
}

inline const Json& field(const Json& j, const std::string& path, const std::string& key) {
  auto it = j.find(key);
  if (it == j.end()) spec_fail(path + "." + key, "missing field");
  return *it;
}

inline long long int_field(const Json& j, const std::string& path, const std::string& key) {
  const Json& v = field(j, path, key);
  if (!v.is_number_integer()) spec_fail(path + "." + key, "expected an integer");
  return v.get<long long>();
}

inline int narrow_int(long long value, const std::string& path) {
  if (value < -1000000000LL || value > 1000000000LL) spec_fail(path, "integer out of range");
  return static_cast<int>(value);
}

inline std::string string_field(const Json& j, const std::string& path, const std::string& key) {
  const Json& v = field(j, path, key);
  if (!v.is_string()) spec_fail(path + "." + key, "expected a string");
  return v.get<std::string>();
}

inline std::vector<int> int_array(const Json& v, const std::string& path) {
  if (!v.is_array()) spec_fail(path, "expected an array of integers");
  std::vector<int> out;
  out.reserve(v.size());
  for (size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number_integer())
      spec_fail(path + "[" + std::to_string(i) + "]", "expected an integer");
    out.push_back(narrow_int(v[i].get<long long>(), path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

inline Permutation permutation_field(const Json& v, const std::string& path) {
  std::vector<int> images = int_array(v, path);
  try {
    return Permutation(std::move(images));
  } catch (const std::invalid_argument& ex) {
    spec_fail(path, ex.what());
  }
}

/// Parses the fields shared by every family: depth, checks, caps.
inline void parse_common(const Json& j, GroupSpec& spec) {
  if (j.contains("depth")) spec.depth = narrow_int(int_field(j, "$", "depth"), "$.depth");
  if (j.contains("checks")) {
    const Json& v = j["checks"];
    if (!v.is_array()) spec_fail("$.checks", "expected an array of check names");
    for (size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_string())
        spec_fail("$.checks[" + std::to_string(i) + "]", "expected a string");
      std::string name = v[i].get<std::string>();
      if (std::find(known_checks().begin(), known_checks().end(), name) == known_checks().end())
        spec_fail("$.checks[" + std::to_string(i) + "]", "unknown check " + name);
      spec.checks.insert(name);
    }
  }
  if (j.contains("cap_enum")) {
    long long cap = int_field(j, "$", "cap_enum");
    if (cap < 1) spec_fail("$.cap_enum", "cap must be positive");
    spec.cap_enum = static_cast<unsigned long long>(cap);
  }
  if (j.contains("cap_level")) {
    long long cap = int_field(j, "$", "cap_level");
    if (cap < 1) spec_fail("$.cap_level", "cap must be positive");
    spec.cap_level = static_cast<unsigned long long>(cap);
  }
}

inline const std::set<std::string> kCommonKeys{"family", "depth", "checks", "cap_enum",
                                               "cap_level"};

inline std::set<std::string> with_common(std::set<std::string> extra) {
  extra.insert(kCommonKeys.begin(), kCommonKeys.end());
  return extra;
}

}  // namespace detail

/// Validates a parsed JSON object into a GroupSpec. Errors carry the path of
/// the offending field.
inline GroupSpec parse_spec_json(const Json& j) {
  if (!j.is_object()) detail::spec_fail("$", "expected a JSON object");
  GroupSpec spec;
  spec.raw = j;
  spec.family = detail::string_field(j, "$", "family");
  detail::parse_common(j, spec);

  if (spec.family == "ggs") {
    detail::check_keys(j, "$", detail::with_common({"p", "k", "e"}));
    int p = detail::narrow_int(detail::int_field(j, "$", "p"), "$.p");
    int k = detail::narrow_int(detail::int_field(j, "$", "k"), "$.k");
    std::vector<int> e = detail::int_array(detail::field(j, "$", "e"), "$.e");
    // Entries are residues modulo p^k; accept any integer representatives.
    if (p >= 2 && k >= 1) {
      long long m = 1;
      for (int i = 0; i < k && m <= kMaxLevelSize; ++i) m *= p;
      if (m <= kMaxLevelSize)
        for (int& value : e) value = static_cast<int>(((value % m) + m) % m);
    }
    try {
      spec.vector = defining_vector(p, k, std::move(e));
    } catch (const CapExceeded&) {
      throw;
    } catch (const std::exception& ex) {
      detail::spec_fail("$", ex.what());
    }
  } else if (spec.family == "dihedral_binary") {
    detail::check_keys(j, "$", detail::with_common({}));
    spec.vector = defining_vector(2, 1, {1, 0});
  } else if (spec.family == "iterated_wreath") {
    detail::check_keys(j, "$", detail::with_common({"levels", "repeat_last"}));
    const Json& levels = detail::field(j, "$", "levels");
    if (!levels.is_array() || levels.empty()) detail::spec_fail("$.levels", "expected a nonempty array");
    for (size_t i = 0; i < levels.size(); ++i) {
      std::string path = "$.levels[" + std::to_string(i) + "]";
      const Json& level = levels[i];
      if (!level.is_object()) detail::spec_fail(path, "expected an object");
      detail::check_keys(level, path, {"degree", "generators"});
      int degree = detail::narrow_int(detail::int_field(level, path, "degree"), path + ".degree");
      const Json& gens = detail::field(level, path, "generators");
      if (!gens.is_array() || gens.empty())
        detail::spec_fail(path + ".generators", "expected a nonempty array");
      std::vector<Permutation> labels;
      for (size_t t = 0; t < gens.size(); ++t) {
        std::string gpath = path + ".generators[" + std::to_string(t) + "]";
        Permutation label = detail::permutation_field(gens[t], gpath);
        if (label.degree() != degree) detail::spec_fail(gpath, "degree mismatch with the level");
        labels.push_back(std::move(label));
      }
      spec.wreath_labels.push_back(std::move(labels));
    }
    if (j.contains("repeat_last")) {
      if (!j["repeat_last"].is_boolean()) detail::spec_fail("$.repeat_last", "expected a boolean");
      spec.repeat_last = j["repeat_last"].get<bool>();
    }
  } else if (spec.family == "gl_congruence") {
    detail::check_keys(j, "$", detail::with_common({"p", "N", "ring"}));
    spec.prime = detail::narrow_int(detail::int_field(j, "$", "p"), "$.p");
    if (spec.prime == 2) detail::spec_fail("$.p", "the congruence family needs an odd prime");
    spec.dimension = detail::narrow_int(detail::int_field(j, "$", "N"), "$.N");
    if (spec.dimension < 1) detail::spec_fail("$.N", "dimension must be positive");
    if (j.contains("ring")) {
      std::string kind = detail::string_field(j, "$", "ring");
      if (kind == "padic")
        spec.ring = RingKind::padic;
      else if (kind == "laurent")
        spec.ring = RingKind::laurent;
      else
        detail::spec_fail("$.ring", "expected \"padic\" or \"laurent\"");
    }
  } else if (spec.family == "automaton") {
    detail::check_keys(j, "$", detail::with_common({"degree", "states", "generators"}));
    Automaton machine;
    machine.degree = detail::narrow_int(detail::int_field(j, "$", "degree"), "$.degree");
    const Json& states = detail::field(j, "$", "states");
    if (!states.is_array() || states.empty()) detail::spec_fail("$.states", "expected a nonempty array");
    std::set<std::string> seen;
    for (size_t i = 0; i < states.size(); ++i) {
      std::string path = "$.states[" + std::to_string(i) + "]";
      const Json& st = states[i];
      if (!st.is_object()) detail::spec_fail(path, "expected an object");
      detail::check_keys(st, path, {"name", "output", "transitions"});
      Automaton::State state;
      state.name = detail::string_field(st, path, "name");
      if (!seen.insert(state.name).second) detail::spec_fail(path + ".name", "duplicate state name");
      state.output = detail::int_array(detail::field(st, path, "output"), path + ".output");
      machine.states.push_back(std::move(state));
    }
    for (size_t i = 0; i < states.size(); ++i) {
      std::string path = "$.states[" + std::to_string(i) + "].transitions";
      const Json& names = detail::field(states[i], "$.states[" + std::to_string(i) + "]",
                                        "transitions");
      if (!names.is_array()) detail::spec_fail(path, "expected an array of state names");
      for (size_t x = 0; x < names.size(); ++x) {
        if (!names[x].is_string())
          detail::spec_fail(path + "[" + std::to_string(x) + "]", "expected a state name");
        try {
          machine.states[i].transitions.push_back(
              machine.state_index(names[x].get<std::string>()));
        } catch (const std::invalid_argument& ex) {
          detail::spec_fail(path + "[" + std::to_string(x) + "]", ex.what());
        }
      }
    }
    try {
      machine.validate();
    } catch (const std::invalid_argument& ex) {
      detail::spec_fail("$.states", ex.what());
    }
    const Json& gens = detail::field(j, "$", "generators");
    if (!gens.is_array() || gens.empty())
      detail::spec_fail("$.generators", "expected a nonempty array of state names");
    for (size_t i = 0; i < gens.size(); ++i) {
      if (!gens[i].is_string())
        detail::spec_fail("$.generators[" + std::to_string(i) + "]", "expected a state name");
      std::string name = gens[i].get<std::string>();
      try {
        machine.state_index(name);
      } catch (const std::invalid_argument& ex) {
        detail::spec_fail("$.generators[" + std::to_string(i) + "]", ex.what());
      }
      spec.generator_states.push_back(std::move(name));
    }
    spec.machine = std::move(machine);
  } else {
    detail::spec_fail("$.family",
                      "unknown family " + spec.family +
                          " (expected ggs, iterated_wreath, dihedral_binary, gl_congruence, "
                          "or automaton)");
  }
  return spec;
}

/// Parses JSON text into a validated GroupSpec.
inline GroupSpec parse_spec(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& ex) {
    throw SpecError(std::string("spec error: invalid JSON: ") + ex.what());
  }
  return parse_spec_json(j);
}

/// Materializes the group a spec describes, to the spec's depth.
inline TreeGroup build_group(const GroupSpec& spec) {
  if (spec.depth < 1) detail::spec_fail("$.depth", "a positive depth is required");
  if (spec.family == "ggs") return ggs_build(*spec.vector, spec.depth);
  if (spec.family == "dihedral_binary") return dihedral_build(spec.depth);
  if (spec.family == "iterated_wreath") {
    std::vector<std::vector<Permutation>> labels = spec.wreath_labels;
    if (static_cast<int>(labels.size()) < spec.depth) {
      if (!spec.repeat_last)
        detail::spec_fail("$.levels", "fewer levels than the depth; set repeat_last to extend");
      while (static_cast<int>(labels.size()) < spec.depth) labels.push_back(labels.back());
    } else if (static_cast<int>(labels.size()) > spec.depth) {
      labels.resize(static_cast<size_t>(spec.depth));
    }
    return wreath_build(labels);
  }
  if (spec.family == "gl_congruence")
    return gl_build(spec.prime, spec.dimension, spec.ring, spec.depth);
  TreeShape shape = TreeShape::regular(spec.machine->degree, spec.depth);
  std::vector<LevelAction> generators;
  generators.reserve(spec.generator_states.size());
  for (const std::string& name : spec.generator_states)
    generators.push_back(materialize(*spec.machine, name, shape));
  return TreeGroup{std::move(shape), spec.generator_states, std::move(generators)};
}

/// Deterministic analysis output: a plain-text rendering and the equivalent
/// JSON document.
struct Report {
  std::string text;
  Json json;
};

namespace detail {

/// Runs one capped analysis, turning a capacity failure into an absent value
/// plus an explanatory note.
template <typename Fn>
auto cap_guarded(Fn&& fn, std::vector<std::string>& notes, const std::string& where)
    -> std::optional<std::invoke_result_t<Fn>> {
  try {
    return std::forward<Fn>(fn)();
  } catch (const CapExceeded& ex) {
    notes.push_back(where + ": " + ex.what());
    return std::nullopt;
  }
}

inline std::string flag_text(const std::optional<bool>& value) {
  if (!value.has_value()) return "n/a";
  return *value ? "yes" : "no";
}

inline Json flag_json(const std::optional<bool>& value) {
  if (!value.has_value()) return nullptr;
  return *value;
}

inline std::string vertex_text(const Vertex& v) {
  std::string out;
  for (size_t i = 0; i < v.word.size(); ++i) {
    if (i) out += '.';
    out += std::to_string(v.word[i]);
  }
  return out;
}

inline std::string parts_text(const std::vector<std::pair<long long, long long>>& parts) {
  std::string out;
  for (const auto& [a, b] : parts)
    out += "(" + std::to_string(a) + "," + std::to_string(b) + ")";
  return out.empty() ? "none" : out;
}

inline std::string verdict_text(Verdict v) {
  switch (v) {
    case Verdict::yes: return "yes";
    case Verdict::no: return "no";
    default: return "unknown";
  }
}

}  // namespace detail

/// Runs the selected analyses and renders the report. Capacity failures are
/// reported per analysis; the remaining analyses still run. Mathematical
/// verdicts never raise.
inline Report run(const GroupSpec& spec) {
  TreeGroup group = build_group(spec);
  int depth = spec.depth;
  std::vector<std::string> notes;

  Json out;
  out["schema_version"] = 1;
  out["spec"] = spec.raw;

  std::ostringstream text;
  text << "arborrep report (schema_version 1)\n";
  text << "family " << spec.family << ", depth " << depth << "\n";
  text << "caps: enumeration " << spec.cap_enum << ", pair cells " << spec.cap_level << "\n";
  text << "checks:";
  for (const std::string& name : known_checks())
    if (spec.wants(name)) text << " " << name;
  text << "\n\n";

  std::vector<std::optional<bool>> locally2_flags;  // per level 1..depth-1
  std::vector<std::optional<bool>> commutative_flags;

  Json levels = Json::array();
  for (int n = 1; n <= depth; ++n) {
    Json entry;
    entry["n"] = n;
    text << "level " << n << ":";

    if (spec.wants("transitivity")) {
      bool spherical = is_level_transitive(group, n);
      entry["spherical"] = spherical;
      text << " spherical=" << (spherical ? "yes" : "no");

      std::optional<bool> locally2;
      if (n < depth) {
        std::string where = "level " + std::to_string(n) + " locally2";
        auto result = detail::cap_guarded(
            [&] { return is_locally_2_transitive(group, n, spec.cap_level); }, notes, where);
        if (result.has_value()) {
          locally2 = result->transitive;
          if (result->witness.has_value()) {
            const PairWitness& w = *result->witness;
            notes.push_back(where + " witness: pair (" + detail::vertex_text(w.u) + ", " +
                            detail::vertex_text(w.v) + ") joint stabilizer of order " +
                            std::to_string(w.stabilizer_order) + " splits " +
                            std::to_string(w.pair_count) + " child pairs into " +
                            std::to_string(w.orbit_count) + " orbits");
          }
        }
        locally2_flags.push_back(locally2);
      } else {
        notes.push_back("level " + std::to_string(n) +
                        " locally2: needs materialization to depth " + std::to_string(n + 1));
      }
      entry["locally2"] = detail::flag_json(locally2);
      text << " locally2=" << detail::flag_text(locally2);

      std::optional<int> rank = detail::cap_guarded(
          [&] { return level_rank(group, n, spec.cap_level); }, notes,
          "level " + std::to_string(n) + " rank");
      std::optional<bool> distance;
      if (rank.has_value()) distance = spherical && *rank == n + 1;
      entry["distance"] = detail::flag_json(distance);
      entry["rank"] = rank.has_value() ? Json(*rank) : Json(nullptr);
      text << " distance=" << detail::flag_text(distance);
      text << " rank=" << (rank.has_value() ? std::to_string(*rank) : "n/a");
    }

    if (spec.wants("gelfand")) {
      std::optional<bool> commutative = detail::cap_guarded(
          [&] { return is_level_commutative(group, n, spec.cap_level); }, notes,
          "level " + std::to_string(n) + " commutative");
      commutative_flags.push_back(commutative);
      entry["commutative"] = detail::flag_json(commutative);
      text << " commutative=" << detail::flag_text(commutative);
    }

    if (spec.wants("decompose")) {
      Vertex spine(std::vector<int>(static_cast<size_t>(n - 1), 0));
      std::string where = "level " + std::to_string(n) + " theta0";
      std::optional<DecompositionRecord> theta;
      try {
        theta = detail::cap_guarded(
            [&] { return local_decomposition(group, spine, spec.cap_enum); }, notes, where);
      } catch (const IntransitiveAction& ex) {
        notes.push_back(where + ": " + ex.what());
      }
      if (theta.has_value()) {
        Json parts = Json::array();
        for (const auto& [d, m] : theta->parts) parts.push_back(Json::array({d, m}));
        entry["theta0"] = parts;
        text << " theta0[v" << (n - 1) << "]=" << detail::parts_text(theta->parts);
      } else {
        entry["theta0"] = nullptr;
        text << " theta0[v" << (n - 1) << "]=n/a";
      }
    }

    if (spec.wants("order")) {
      std::optional<unsigned long long> order;
      try {
        StabChain chain = schreier_sims(level_generators_of(group, n), group.shape.level_size(n));
        order = chain.order();
      } catch (const std::overflow_error&) {
        notes.push_back("level " + std::to_string(n) + " image_order: exceeds the 64-bit range");
      }
      entry["image_order"] = order.has_value() ? Json(*order) : Json(nullptr);
      text << " image_order=" << (order.has_value() ? std::to_string(*order) : "n/a");
    }

    levels.push_back(std::move(entry));
    text << "\n";
  }
  out["levels"] = std::move(levels);
  text << "\n";

  if (spec.wants("gelfand")) {
    bool any_unknown = false;
    std::optional<int> first_false;
    for (int n = 1; n <= depth; ++n) {
      const std::optional<bool>& flag = commutative_flags[static_cast<size_t>(n - 1)];
      if (!flag.has_value()) any_unknown = true;
      else if (!*flag && !first_false.has_value()) first_false = n;
    }
    text << "gelfand to depth " << depth << ": ";
    if (first_false.has_value())
      text << "no (first non-commutative level " << *first_false << ")";
    else if (any_unknown)
      text << "undetermined (capacity)";
    else
      text << "yes";
    text << "\n";
  }

  if (spec.wants("zeta")) {
    Json zeta_json;
    zeta_json["depth"] = depth;
    std::optional<DirichletPolynomial> zeta;
    try {
      zeta = detail::cap_guarded([&] { return boundary_zeta(group, spec.cap_enum); }, notes,
                                 "zeta");
    } catch (const IntransitiveAction& ex) {
      notes.push_back(std::string("zeta: ") + ex.what());
    }
    if (zeta.has_value()) {
      Json terms = Json::array();
      for (const auto& [d, c] : zeta->terms) terms.push_back(Json::array({d, c}));
      zeta_json["terms"] = terms;
      text << "zeta to depth " << depth << ": " << detail::parts_text(zeta->terms) << "\n";
    } else {
      zeta_json["terms"] = nullptr;
      text << "zeta to depth " << depth << ": n/a\n";
    }
    out["zeta"] = std::move(zeta_json);
  }

  if (spec.vector.has_value()) {
    const DefiningVector& e = *spec.vector;
    bool aperiodic = ggs_is_aperiodic(e);
    bool centered = ggs_is_centered(e);
    Verdict prediction = ggs_prediction(e);
    Json ggs;
    ggs["aperiodic"] = aperiodic;
    ggs["centered"] = centered;
    ggs["prediction"] = detail::verdict_text(prediction);
    out["ggs"] = std::move(ggs);

    std::string observed = "not computed";
    if (spec.wants("transitivity") && depth >= 2) {
      bool any_unknown = false;
      bool any_false = false;
      for (const std::optional<bool>& flag : locally2_flags) {
        if (!flag.has_value()) any_unknown = true;
        else if (!*flag) any_false = true;
      }
      if (any_false) observed = "no";
      else if (any_unknown) observed = "incomplete";
      else observed = "yes";
    }
    std::string agreement;
    if (prediction == Verdict::unknown) {
      agreement = "no prediction";
    } else if (observed == "yes" || observed == "no") {
      bool predicted_yes = prediction == Verdict::yes;
      bool observed_yes = observed == "yes";
      if (predicted_yes == observed_yes)
        agreement = "yes";
      else if (predicted_yes)
        agreement = "NO";
      else
        agreement = "undecided (failure may lie beyond depth " + std::to_string(depth) + ")";
    } else {
      agreement = "undecided";
    }
    text << "ggs: aperiodic=" << (aperiodic ? "yes" : "no")
         << " centered=" << (centered ? "yes" : "no")
         << " prediction=" << detail::verdict_text(prediction) << " observed=" << observed
         << " agreement=" << agreement << "\n";
  }

  if (!notes.empty()) {
    text << "\nnotes:\n";
    for (const std::string& note : notes) text << "  " << note << "\n";
  }

  return {text.str(), std::move(out)};
}

}  // namespace arborrep
