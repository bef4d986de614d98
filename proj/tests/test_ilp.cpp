#include <doctest.h>

#include <cctype>
#include <set>
#include <sstream>

#include "rplan/error.hpp"
#include "rplan/formulations.hpp"
#include "rplan/ilp.hpp"
#include "support.hpp"

using namespace rplan;

namespace {

// Names listed in the Binary section of LP text.
std::vector<std::string> declared_binaries(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  bool inside = false;
  std::vector<std::string> out;
  while (std::getline(in, line)) {
    if (line == "Binary") {
      inside = true;
      continue;
    }
    if (line == "End") break;
    if (!inside) continue;
    std::istringstream words(line);
    std::string w;
    while (words >> w) out.push_back(w);
  }
  return out;
}

}  // namespace

TEST_CASE("model construction") {
  IlpModel m;
  const VarIndex a = m.add_binary("a", 1);
  const VarIndex b = m.add_binary("b");
  m.set_objective(b, 2);
  m.add_constraint("", {{a, 1}, {b, 0}, {a, 2}}, Sense::GE, 1);
  const Constraint& c = m.constraint(0);
  CHECK(c.name == "c1");
  REQUIRE(c.terms.size() == 1);
  CHECK(c.terms[0].var == a);
  CHECK(c.terms[0].coef == 3.0);
  CHECK(m.find("b") == b);
  CHECK_FALSE(m.find("zz").has_value());
  CHECK(m.objective_integral());
  m.set_objective(a, 0.5);
  CHECK_FALSE(m.objective_integral());
  CHECK(std::string(sense_symbol(Sense::LE)) == "<=");
  CHECK(std::string(sense_symbol(Sense::EQ)) == "=");
}

TEST_CASE("evaluate") {
  IlpModel m;
  const VarIndex y = m.add_binary("y", 1);
  m.add_constraint("", {{y, 1}}, Sense::GE, 1);

  const FeasibilityReport ok = evaluate(m, make_assignment(m, {1.0}));
  CHECK(ok.feasible);
  CHECK(ok.objective == 1.0);

  const FeasibilityReport bad = evaluate(m, make_assignment(m, {0.0}));
  CHECK_FALSE(bad.feasible);
  CHECK(bad.messages() == std::vector<std::string>{"c1: 0 < 1"});

  CHECK_FALSE(evaluate(m, make_assignment(m, {0.5})).feasible);
  Assignment lie = make_assignment(m, {1.0});
  lie.objective_value = 0.0;
  CHECK_FALSE(evaluate(m, lie).feasible);

  CHECK(evaluate(m, std::map<std::string, double>{{"y", 1.0}}).feasible);
  CHECK_THROWS_AS(evaluate(m, std::map<std::string, double>{{"q", 1.0}}), InputError);
  CHECK_THROWS_AS(evaluate(m, std::map<std::string, double>{}), InputError);

  m.fix_zero(y);
  CHECK_FALSE(evaluate(m, make_assignment(m, {1.0})).feasible);
}

TEST_CASE("LP export skeleton") {
  IlpModel m;
  const VarIndex y = m.add_binary("y", 1);
  m.add_constraint("", {{y, 1}}, Sense::GE, 1);
  const std::string text = export_lp_text(m);
  CHECK(text.find("Minimize") != std::string::npos);
  CHECK(text.find("Subject To") != std::string::npos);
  CHECK(text.find("Binary") != std::string::npos);
  CHECK(text.find("c1: + y >= 1") != std::string::npos);
  CHECK(declared_binaries(text) == std::vector<std::string>{"y"});

  IlpModel empty;
  empty.add_binary("z", 1);
  const std::string e = export_lp_text(empty);
  CHECK(e.find("Subject To\nBinary\n") != std::string::npos);
}

TEST_CASE("LP names are sanitized and unique") {
  IlpModel m;
  m.add_binary("x[q0,k1](a,b)");
  m.add_binary("x[q0,k1](a;b)");
  m.add_binary("9lives");
  m.add_binary("end");
  const auto names = lp_variable_names(m);
  std::set<std::string> seen;
  for (const std::string& n : names) {
    CHECK_FALSE(n.empty());
    CHECK_FALSE(std::isdigit(static_cast<unsigned char>(n[0])));
    for (char c : n) CHECK((std::isalnum(static_cast<unsigned char>(c)) || c == '_'));
    seen.insert(n);
  }
  CHECK(seen.size() == names.size());
  CHECK(names[3] != "end");
  CHECK_THROWS_AS(m.add_binary(""), InputError);
}

TEST_CASE("LP export wraps long rows and lists fixings") {
  IlpModel m;
  std::vector<Term> terms;
  for (int i = 0; i < 200; ++i) terms.push_back({m.add_binary("long_variable_name_" + std::to_string(i), 1), 1});
  m.add_constraint("wide", terms, Sense::LE, 3);
  m.fix_zero(5);
  const std::string text = export_lp_text(m, LpExportOptions{80});
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) CHECK(line.size() <= 80);
  CHECK(text.find("Bounds\n long_variable_name_5 = 0\n") != std::string::npos);
  CHECK(declared_binaries(text).size() == 200);
}

TEST_CASE("link-based LP declares |R| + K|Q|(|R|^2+|R|+1) binaries") {
  const FiberNetwork net = rplan::testing::complete_network(2, 2);
  const EndNodePairSet q = build_pair_set(net, 0);
  const CandidateLinkSet links = build_candidate_links(net, q);
  const auto req = uniform_requirements(net, q, 1, 1, 5, 10.0);
  const FormulationArtifacts f = build_link_based(links, req);
  CHECK(declared_binaries(export_lp_text(f.model)).size() == 9);
}
