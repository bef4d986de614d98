#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <functional>
#include <string_view>
#include <utility>

#include "rplan/error.hpp"
#include "rplan/ilp.hpp"

namespace rplan {

namespace {

bool is_alnum(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

bool is_keyword(std::string_view s) {
  if (s.size() > 8) return false;
  static const std::array<const char*, 18> words = {
      "st",     "s_t",   "subject", "minimize", "maximize", "min",
      "max",    "bound", "bounds",  "binary",   "binaries", "bin",
      "general", "free", "inf",     "end",      "infinity", "generals"};
  std::array<char, 8> lower{};
  for (std::size_t i = 0; i < s.size(); ++i) {
    lower[i] = static_cast<char>(std::tolower(static_cast<unsigned char>(s[i])));
  }
  const std::string_view l(lower.data(), s.size());
  return std::any_of(words.begin(), words.end(), [&](const char* w) { return l == w; });
}

// Sanitized names packed into one buffer.
class NameList {
 public:
  void reserve(std::size_t names, std::size_t chars) {
    starts_.reserve(names + 1);
    pool_.reserve(chars);
  }
  std::size_t size() const { return starts_.size() - 1; }
  std::string_view operator[](std::size_t i) const {
    return std::string_view(pool_).substr(starts_[i], starts_[i + 1] - starts_[i]);
  }

  // Appends the LP-safe form of `name`: runs of other characters become one
  // '_', edge underscores go, and a leading digit or keyword gets a prefix.
  void push_sanitized(std::string_view name, char prefix) {
    const std::size_t begin = pool_.size();
    for (char c : name) {
      if (is_alnum(c) || c == '_') {
        pool_.push_back(c);
      } else if (pool_.size() > begin && pool_.back() != '_') {
        pool_.push_back('_');
      }
    }
    while (pool_.size() > begin && pool_.back() == '_') pool_.pop_back();
    const std::string_view got = std::string_view(pool_).substr(begin);
    if (got.empty() || (got[0] >= '0' && got[0] <= '9') || is_keyword(got)) {
      pool_.insert(pool_.begin() + static_cast<std::ptrdiff_t>(begin), {prefix, '_'});
    }
    starts_.push_back(pool_.size());
  }

  // Replaces the last name.
  void replace_last(std::string_view name) {
    pool_.resize(starts_[starts_.size() - 2]);
    pool_.append(name);
    starts_.back() = pool_.size();
  }

  std::vector<std::string> strings() const {
    std::vector<std::string> out;
    out.reserve(size());
    for (std::size_t i = 0; i < size(); ++i) out.emplace_back((*this)[i]);
    return out;
  }

 private:
  std::string pool_;
  std::vector<std::size_t> starts_{0};
};

// Conservative: equal 64-bit hashes count as a possible duplicate.
bool may_have_duplicates(const NameList& names) {
  const std::size_t n = names.size();
  std::vector<std::uint64_t> keys(n), tmp(n);
  for (std::size_t i = 0; i < n; ++i) keys[i] = std::hash<std::string_view>{}(names[i]);
  // LSD radix sort, 16 bits per pass.
  std::vector<std::size_t> count(1 << 16);
  for (int shift = 0; shift < 64; shift += 16) {
    std::fill(count.begin(), count.end(), 0);
    for (std::uint64_t k : keys) ++count[(k >> shift) & 0xffff];
    std::size_t sum = 0;
    for (auto& c : count) sum += std::exchange(c, sum);
    for (std::uint64_t k : keys) tmp[count[(k >> shift) & 0xffff]++] = k;
    keys.swap(tmp);
  }
  return std::adjacent_find(keys.begin(), keys.end()) != keys.end();
}

// Sanitizes each name and makes the results unique; a clash gets "_2", "_3",
// and so on, checked against every earlier name.
template <class Range, class NameOfItem>
NameList unique_names(const Range& items, const NameOfItem& raw_name, char prefix) {
  NameList out;
  std::size_t chars = 0;
  for (const auto& it : items) chars += raw_name(it).size() + 2;
  out.reserve(items.size(), chars);
  for (const auto& it : items) out.push_sanitized(raw_name(it), prefix);
  if (!may_have_duplicates(out)) return out;

  NameList seq;
  seq.reserve(items.size(), chars + chars / 8);
  detail::NameTable used;
  used.reserve(items.size());
  auto name_of = [&](std::uint32_t i) { return seq[i]; };
  for (const auto& it : items) {
    seq.push_sanitized(raw_name(it), prefix);
    const auto idx = static_cast<std::uint32_t>(seq.size() - 1);
    if (used.insert(idx, name_of)) continue;
    const std::string base(seq[idx]);
    for (std::size_t n = 2;; ++n) {
      seq.replace_last(base + "_" + std::to_string(n));
      if (used.insert(idx, name_of)) break;
    }
  }
  return seq;
}

NameList variable_names(const IlpModel& model) {
  return unique_names(model.variables(), [](const Variable& v) -> std::string_view { return v.name; }, 'v');
}

class LineWriter {
 public:
  LineWriter(std::string& out, std::size_t max_line) : out_(out), max_(max_line) {}

  void begin(std::string_view head) {
    out_.append(head);
    col_ = head.size();
  }
  void token(std::string_view tok) {
    if (col_ + tok.size() + 1 > max_ && col_ > 1) {
      out_.append("\n ");
      col_ = 1;
    }
    out_.push_back(' ');
    out_.append(tok);
    col_ += tok.size() + 1;
  }
  // "a b", never split across lines.
  void token(std::string_view a, std::string_view b) {
    const std::size_t len = a.size() + 1 + b.size();
    if (col_ + len + 1 > max_ && col_ > 1) {
      out_.append("\n ");
      col_ = 1;
    }
    out_.push_back(' ');
    out_.append(a);
    out_.push_back(' ');
    out_.append(b);
    col_ += len + 1;
  }
  void end() {
    out_.push_back('\n');
    col_ = 0;
  }

 private:
  std::string& out_;
  std::size_t max_;
  std::size_t col_ = 0;
};

std::string number(double v) {
  std::array<char, 32> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

void write_terms(LineWriter& w, const std::vector<Term>& terms,
                 const NameList& names) {
  std::array<char, 32> buf{};
  for (const Term& t : terms) {
    double a = std::abs(t.coef);
    w.token(t.coef < 0 ? "-" : "+");
    if (a != 1.0) {
      auto res = std::to_chars(buf.data(), buf.data() + buf.size(), a);
      w.token(std::string_view(buf.data(), static_cast<std::size_t>(res.ptr - buf.data())), names[t.var]);
    } else {
      w.token(names[t.var]);
    }
  }
}

}  // namespace

std::vector<std::string> lp_variable_names(const IlpModel& model) {
  return variable_names(model).strings();
}

std::string export_lp_text(const IlpModel& model, const LpExportOptions& options) {
  const NameList names = variable_names(model);
  const NameList row_names =
      unique_names(model.constraints(), [](const Constraint& c) -> std::string_view { return c.name; }, 'r');

  // Size estimate: every term as "+ coef name", the Binary and Bounds lists,
  // plus room for row heads and line breaks.
  std::size_t estimate = 4096;
  for (std::size_t j = 0; j < names.size(); ++j) estimate += 2 * (names[j].size() + 8);
  for (const auto& c : model.constraints()) {
    estimate += c.name.size() + 32;
    for (const Term& t : c.terms) estimate += names[t.var].size() + (t.coef == 1.0 || t.coef == -1.0 ? 4 : 28);
  }
  std::string out;
  out.reserve(estimate + estimate / 32);
  LineWriter w(out, std::max<std::size_t>(options.max_line, 32));

  out.append("\\ binary ILP, ");
  out.append(std::to_string(model.var_count()));
  out.append(" variables, ");
  out.append(std::to_string(model.constraint_count()));
  out.append(" constraints\nMinimize\n");
  std::vector<Term> obj;
  for (VarIndex j = 0; j < model.var_count(); ++j) {
    if (model.objective()[j] != 0.0) obj.push_back({j, model.objective()[j]});
  }
  w.begin(" obj:");
  if (obj.empty() && model.var_count() > 0) {
    w.token("0");
    w.token(names[0]);
  } else {
    write_terms(w, obj, names);
  }
  w.end();

  out.append("Subject To\n");
  for (std::size_t i = 0; i < model.constraint_count(); ++i) {
    const Constraint& c = model.constraint(i);
    std::string head = " ";
    head.append(row_names[i]);
    head.push_back(':');
    w.begin(head);
    if (c.terms.empty()) {
      // A row without terms still has to name a variable to be valid.
      if (model.var_count() == 0) {
        throw InputError("cannot export an empty row from a model without variables");
      }
      w.token("0");
      w.token(names[0]);
    } else {
      write_terms(w, c.terms, names);
    }
    w.token(sense_symbol(c.sense));
    w.token(number(c.rhs));
    w.end();
  }

  bool any_fixed = std::any_of(model.variables().begin(), model.variables().end(),
                               [](const Variable& v) { return v.fixed_zero; });
  if (any_fixed) {
    out.append("Bounds\n");
    for (VarIndex j = 0; j < model.var_count(); ++j) {
      if (!model.variable(j).fixed_zero) continue;
      out.push_back(' ');
      out.append(names[j]);
      out.append(" = 0\n");
    }
  }

  out.append("Binary\n");
  w.begin("");
  for (std::size_t j = 0; j < names.size(); ++j) w.token(names[j]);
  w.end();
  out.append("End\n");
  return out;
}

void export_lp_file(const IlpModel& model, const std::string& path,
                    const LpExportOptions& options) {
  std::string text = export_lp_text(model, options);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write LP file '" + path + "'");
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!f) throw InputError("failed writing LP file '" + path + "'");
}

}  // namespace rplan
