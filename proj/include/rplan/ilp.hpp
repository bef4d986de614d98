#pragma once

// Solver-agnostic binary ILP: named 0/1 variables, sparse linear rows and a
// linear minimization objective.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <algorithm>
#include <functional>
#include <vector>

namespace rplan {

using VarIndex = std::uint32_t;

enum class Sense { LE, EQ, GE };

const char* sense_symbol(Sense s);  // "<=", "=", ">="

struct Term {
  VarIndex var;
  double coef;
};

struct Variable {
  std::string name;
  bool fixed_zero = false;  // upper bound tightened to 0
};

struct Constraint {
  std::string name;
  std::vector<Term> terms;  // sorted by var, no zero or repeated entries
  Sense sense = Sense::LE;
  double rhs = 0.0;
};

namespace detail {

// Open-addressing set over strings held by the caller, addressed by index.
// `name_of(i)` must return the string of entry i.
class NameTable {
 public:
  void reserve(std::size_t n) {
    std::size_t cap = 16;
    while (cap < 2 * n) cap *= 2;
    if (cap > slots_.size()) rehash(cap);
  }

  template <class NameOf>
  std::optional<std::uint32_t> find(std::string_view key, const NameOf& name_of) const {
    if (slots_.empty()) return std::nullopt;
    const std::uint32_t h = hash(key);
    const std::size_t mask = slots_.size() - 1;
    for (std::size_t at = h & mask;; at = (at + 1) & mask) {
      const std::uint64_t s = slots_[at];
      if (s == 0) return std::nullopt;
      const auto idx = static_cast<std::uint32_t>(s) - 1;
      if (static_cast<std::uint32_t>(s >> 32) == h && name_of(idx) == key) return idx;
    }
  }

  // False when an equal name is already present.
  template <class NameOf>
  bool insert(std::uint32_t index, const NameOf& name_of) {
    if (2 * (size_ + 1) > slots_.size()) rehash(std::max<std::size_t>(16, 2 * slots_.size()));
    const std::string_view key = name_of(index);
    const std::uint32_t h = hash(key);
    const std::size_t mask = slots_.size() - 1;
    std::size_t at = h & mask;
    for (;; at = (at + 1) & mask) {
      const std::uint64_t s = slots_[at];
      if (s == 0) break;
      if (static_cast<std::uint32_t>(s >> 32) == h && name_of(static_cast<std::uint32_t>(s) - 1) == key) {
        return false;
      }
    }
    slots_[at] = (std::uint64_t{h} << 32) | (std::uint64_t{index} + 1);
    ++size_;
    return true;
  }

 private:
  static std::uint32_t hash(std::string_view key) {
    const std::size_t h = std::hash<std::string_view>{}(key);
    return static_cast<std::uint32_t>(h ^ (static_cast<std::uint64_t>(h) >> 32));
  }

  void rehash(std::size_t cap) {
    std::vector<std::uint64_t> old(cap, 0);
    old.swap(slots_);
    const std::size_t mask = cap - 1;
    for (std::uint64_t s : old) {
      if (s == 0) continue;
      std::size_t at = static_cast<std::uint32_t>(s >> 32) & mask;
      while (slots_[at] != 0) at = (at + 1) & mask;
      slots_[at] = s;
    }
  }

  std::vector<std::uint64_t> slots_;  // 0 empty, else hash << 32 | (index + 1)
  std::size_t size_ = 0;
};

}  // namespace detail

class IlpModel {
 public:
  VarIndex add_binary(std::string name, double objective = 0.0);
  void fix_zero(VarIndex v);
  void set_objective(VarIndex v, double coef);
  // An empty name becomes "c<n>" with n the 1-based row number. Repeated
  // variables are merged and zero coefficients dropped.
  std::size_t add_constraint(std::string name, std::vector<Term> terms,
                             Sense sense, double rhs);
  void reserve(std::size_t vars, std::size_t rows);

  std::size_t var_count() const { return vars_.size(); }
  std::size_t constraint_count() const { return rows_.size(); }
  const Variable& variable(VarIndex v) const { return vars_[v]; }
  const std::vector<Variable>& variables() const { return vars_; }
  const Constraint& constraint(std::size_t i) const { return rows_[i]; }
  const std::vector<Constraint>& constraints() const { return rows_; }
  const std::vector<double>& objective() const { return obj_; }
  std::optional<VarIndex> find(std::string_view name) const;

  double objective_value(std::span<const double> x) const;
  // True when every objective coefficient is an integer, so optimal values
  // are integral and bounds may be rounded up.
  bool objective_integral() const;

 private:
  std::vector<Variable> vars_;
  std::vector<Constraint> rows_;
  std::vector<double> obj_;
  detail::NameTable by_name_;
};

struct Assignment {
  std::vector<double> values;  // indexed by VarIndex
  double objective_value = 0.0;
};

Assignment make_assignment(const IlpModel& model, std::vector<double> values);

struct Violation {
  std::string subject;  // constraint or variable name
  double lhs;
  double rhs;
  std::string text;  // e.g. "c1: 0 < 1"
};

struct FeasibilityReport {
  bool feasible = true;
  double objective = 0.0;
  std::vector<Violation> violations;

  std::vector<std::string> messages() const;
};

// Checks every row, binarity, fixings, and the stated objective value.
FeasibilityReport evaluate(const IlpModel& model, const Assignment& a,
                           double tol = 1e-6);
// Name-keyed form; unknown names and missing variables throw InputError.
FeasibilityReport evaluate(const IlpModel& model,
                           const std::map<std::string, double>& values,
                           double tol = 1e-6);

// LP-format names: [A-Za-z0-9_], not starting with a digit, unique.
std::vector<std::string> lp_variable_names(const IlpModel& model);

struct LpExportOptions {
  std::size_t max_line = 250;
};

std::string export_lp_text(const IlpModel& model, const LpExportOptions& options = {});
void export_lp_file(const IlpModel& model, const std::string& path,
                    const LpExportOptions& options = {});

}  // namespace rplan
