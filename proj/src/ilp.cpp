#include "rplan/ilp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "rplan/error.hpp"

namespace rplan {

const char* sense_symbol(Sense s) {
  switch (s) {
    case Sense::LE: return "<=";
    case Sense::EQ: return "=";
    case Sense::GE: return ">=";
  }
  return "?";
}

VarIndex IlpModel::add_binary(std::string name, double objective) {
  if (name.empty()) throw InputError("variable name must not be empty");
  if (!std::isfinite(objective)) {
    throw InputError("non-finite objective coefficient for '" + name + "'");
  }
  auto idx = static_cast<VarIndex>(vars_.size());
  vars_.push_back({std::move(name), false});
  if (!by_name_.insert(idx, [&](VarIndex i) -> std::string_view { return vars_[i].name; })) {
    std::string dup = std::move(vars_.back().name);
    vars_.pop_back();
    throw InputError("duplicate variable name '" + dup + "'");
  }
  obj_.push_back(objective);
  return idx;
}

void IlpModel::fix_zero(VarIndex v) { vars_.at(v).fixed_zero = true; }

void IlpModel::set_objective(VarIndex v, double coef) {
  if (!std::isfinite(coef)) throw InputError("non-finite objective coefficient");
  obj_.at(v) = coef;
}

std::size_t IlpModel::add_constraint(std::string name, std::vector<Term> terms,
                                     Sense sense, double rhs) {
  if (!std::isfinite(rhs)) throw InputError("non-finite right-hand side");
  if (name.empty()) name = "c" + std::to_string(rows_.size() + 1);
  for (const Term& t : terms) {
    if (t.var >= vars_.size()) {
      throw InputError("constraint '" + name + "' references an undeclared variable");
    }
    if (!std::isfinite(t.coef)) {
      throw InputError("constraint '" + name + "' has a non-finite coefficient");
    }
  }
  auto by_var = [](const Term& a, const Term& b) { return a.var < b.var; };
  if (!std::is_sorted(terms.begin(), terms.end(), by_var)) std::sort(terms.begin(), terms.end(), by_var);
  std::size_t out = 0;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (out > 0 && terms[out - 1].var == terms[i].var) {
      terms[out - 1].coef += terms[i].coef;
    } else {
      terms[out++] = terms[i];
    }
  }
  terms.resize(out);
  std::erase_if(terms, [](const Term& t) { return t.coef == 0.0; });
  rows_.push_back({std::move(name), std::move(terms), sense, rhs});
  return rows_.size() - 1;
}

void IlpModel::reserve(std::size_t vars, std::size_t rows) {
  vars_.reserve(vars);
  obj_.reserve(vars);
  by_name_.reserve(vars);
  rows_.reserve(rows);
}

std::optional<VarIndex> IlpModel::find(std::string_view name) const {
  return by_name_.find(name, [&](VarIndex i) -> std::string_view { return vars_[i].name; });
}

double IlpModel::objective_value(std::span<const double> x) const {
  double total = 0.0;
  for (std::size_t j = 0; j < obj_.size(); ++j) total += obj_[j] * x[j];
  return total;
}

bool IlpModel::objective_integral() const {
  return std::all_of(obj_.begin(), obj_.end(),
                     [](double c) { return c == std::floor(c); });
}

Assignment make_assignment(const IlpModel& model, std::vector<double> values) {
  if (values.size() != model.var_count()) {
    throw InputError("assignment size does not match the model");
  }
  Assignment a;
  a.objective_value = model.objective_value(values);
  a.values = std::move(values);
  return a;
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

std::vector<std::string> FeasibilityReport::messages() const {
  std::vector<std::string> out;
  out.reserve(violations.size());
  for (const auto& v : violations) out.push_back(v.text);
  return out;
}

FeasibilityReport evaluate(const IlpModel& model, const Assignment& a,
                           double tol) {
  if (a.values.size() != model.var_count()) {
    throw InputError("assignment is not total over the model variables");
  }
  FeasibilityReport rep;
  for (VarIndex j = 0; j < model.var_count(); ++j) {
    double x = a.values[j];
    const Variable& var = model.variable(j);
    if (std::abs(x) > tol && std::abs(x - 1.0) > tol) {
      rep.violations.push_back(
          {var.name, x, 1.0, var.name + ": " + fmt(x) + " not in {0, 1}"});
    } else if (var.fixed_zero && std::abs(x) > tol) {
      rep.violations.push_back(
          {var.name, x, 0.0, var.name + ": " + fmt(x) + " > 0 (fixed)"});
    }
  }
  for (const Constraint& c : model.constraints()) {
    double lhs = 0.0;
    for (const Term& t : c.terms) lhs += t.coef * a.values[t.var];
    const char* rel = nullptr;
    if (c.sense != Sense::GE && lhs > c.rhs + tol) rel = " > ";
    if (c.sense != Sense::LE && lhs < c.rhs - tol) rel = " < ";
    if (rel != nullptr) {
      rep.violations.push_back(
          {c.name, lhs, c.rhs, c.name + ": " + fmt(lhs) + rel + fmt(c.rhs)});
    }
  }
  rep.objective = model.objective_value(a.values);
  if (std::abs(rep.objective - a.objective_value) >
      tol * std::max(1.0, std::abs(rep.objective))) {
    rep.violations.push_back({"objective", a.objective_value, rep.objective,
                              "objective: stated " + fmt(a.objective_value) +
                                  " but evaluates to " + fmt(rep.objective)});
  }
  rep.feasible = rep.violations.empty();
  return rep;
}

FeasibilityReport evaluate(const IlpModel& model,
                           const std::map<std::string, double>& values,
                           double tol) {
  std::vector<double> x(model.var_count(), 0.0);
  std::vector<bool> seen(model.var_count(), false);
  for (const auto& [name, v] : values) {
    auto idx = model.find(name);
    if (!idx) throw InputError("unknown variable '" + name + "'");
    x[*idx] = v;
    seen[*idx] = true;
  }
  for (VarIndex j = 0; j < model.var_count(); ++j) {
    if (!seen[j]) {
      throw InputError("assignment misses variable '" + model.variable(j).name + "'");
    }
  }
  return evaluate(model, make_assignment(model, std::move(x)), tol);
}

}  // namespace rplan
