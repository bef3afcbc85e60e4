// liftsl: command-line front end for the lifting library.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "liftsl/error.hpp"
#include "liftsl/input.hpp"
#include "liftsl/lifting.hpp"
#include "liftsl/parametricity.hpp"
#include "liftsl/scenario.hpp"

using namespace liftsl;
using nlohmann::ordered_json;

namespace {

enum class Format { Text, Structured, Dot };

struct Globals {
  Loc locs = 3;
  std::string vals = "0";
  std::string domain = "0,1";
  int gens = 2;
  std::size_t heap_size = 1;
  int arity = 2;
  int threads = 1;
  Format format = Format::Text;
};

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<Val> parse_vals(const std::string& text, const char* flag) {
  std::vector<Val> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stol(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InputError(std::string("bad value '") + item + "' in " + flag);
    }
  }
  if (out.empty()) throw InputError(std::string(flag) + " needs at least one value");
  return out;
}

SearchBudget budget(const Globals& g) {
  return SearchBudget{g.locs, parse_vals(g.vals, "--vals"), g.gens, g.heap_size, g.threads};
}

ValueDomain domain(const Globals& g) { return ValueDomain{parse_vals(g.domain, "--domain"), g.locs}; }

std::string describe(const SearchBudget& b) {
  std::string vals;
  for (Val v : b.values) vals += (vals.empty() ? "" : ",") + std::to_string(v);
  return "locs <= " + std::to_string(b.max_locs) + ", vals {" + vals + "}, gens <= " + std::to_string(b.max_gens) +
         ", heap size <= " + std::to_string(b.max_heap_size);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Error text with the file name in front of the line:column position.
struct FileError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class F>
auto with_file(const std::string& path, F&& parse) {
  const std::string text = read_file(path);
  try {
    return parse(text);
  } catch (const ParseError& e) {
    throw FileError(path + ":" + e.what());
  }
}

ImplicationInput load_implication(const std::string& path) {
  return with_file(path, [](const std::string& t) { return parse_implication_input(t); });
}

Scenario load_scenario(const std::string& path) {
  return with_file(path, [](const std::string& t) { return parse_scenario(t); });
}

class Out {
 public:
  explicit Out(Format f) : f_(f) {}
  bool text() const { return f_ == Format::Text; }
  Format format() const { return f_; }
  void line(const std::string& s) {
    if (f_ == Format::Text) std::cout << s << "\n";
  }
  void record(const ordered_json& j) {
    if (f_ == Format::Structured) std::cout << j.dump() << "\n";
  }
  void dot(const std::string& s) {
    if (f_ == Format::Dot) std::cout << s;
  }

 private:
  Format f_;
};

// Canonical form if the implication already has it, otherwise the reduced
// family of its simple forms.
std::vector<ImplicationForm> family_of(const ImplicationInput& in) {
  try {
    return {as_implication_form(in.lhs, in.rhs)};
  } catch (const ShapeError&) {
  }
  const auto l = to_simple(in.lhs);
  const auto r = to_simple(in.rhs);
  if (!l) throw ShapeError("left-hand side has no simple form: " + pretty(in.lhs));
  if (!r) throw ShapeError("right-hand side has no simple form: " + pretty(in.rhs));
  return reduce_implication(*l, *r);
}

std::string names(const std::vector<std::string>& xs) {
  std::string s = "{";
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + xs[i];
  return s + "}";
}

int cmd_parse(const Globals& g, const std::string& path) {
  Out out(g.format);
  const std::string text = read_file(path);
  if (text.find("\ncontext:") != std::string::npos || text.rfind("context:", 0) == 0) {
    const Scenario s = load_scenario(path);
    ordered_json j{{"command", "parse"}, {"kind", "scenario"}, {"name", s.name}};
    out.line("scenario " + (s.name.empty() ? path : s.name));
    for (const auto& t : s.context) {
      out.line("  {" + pretty(t.pre) + "} " + t.op + " {" + pretty(t.post) + "}");
      j["context"].push_back({{"op", t.op}, {"pre", pretty(t.pre)}, {"post", pretty(t.post)}});
    }
    for (const auto& [name, impl] : {std::pair{"impl1", &s.impl1}, std::pair{"impl2", &s.impl2}}) {
      for (const auto& [op, c] : *impl) {
        out.line(std::string("  ") + name + " " + op + " = " + to_string(*c));
        j[name][op] = to_string(*c);
      }
    }
    for (const auto& [a, r] : s.coupling) {
      out.line("  coupling " + a + " = " + to_string(r));
      j["coupling"][a] = to_string(r);
    }
    out.line("  client {" + pretty(s.pre) + "} " + to_string(*s.client) + " {" + pretty(s.post) + "}");
    j["client"] = to_string(*s.client);
    j["pre"] = pretty(s.pre);
    j["post"] = pretty(s.post);
    out.record(j);
    return 0;
  }
  const ImplicationInput in = load_implication(path);
  out.line("lhs: " + pretty(in.lhs));
  out.line("rhs: " + pretty(in.rhs));
  std::vector<std::string> av(in.avars.begin(), in.avars.end());
  out.line("avars: " + names(av));
  out.record({{"command", "parse"}, {"kind", "implication"}, {"lhs", pretty(in.lhs)}, {"rhs", pretty(in.rhs)},
              {"avars", av}});
  return 0;
}

int cmd_normalize(const Globals& g, const std::string& path) {
  Out out(g.format);
  const ImplicationInput in = load_implication(path);
  ordered_json j{{"command", "normalize"}};
  for (const auto& [side, a] : {std::pair{"lhs", in.lhs}, std::pair{"rhs", in.rhs}}) {
    const auto s = to_simple(a);
    const std::string shown = s ? to_string(*s) : "NOT SIMPLE";
    out.line(std::string(side) + ": " + shown);
    j[side] = shown;
    j[std::string(side) + "_simple"] = s.has_value();
  }
  out.record(j);
  return 0;
}

int cmd_reduce(const Globals& g, const std::string& path) {
  Out out(g.format);
  const ImplicationInput in = load_implication(path);
  const auto l = to_simple(in.lhs);
  const auto r = to_simple(in.rhs);
  if (!l || !r) throw ShapeError(std::string(!l ? "left" : "right") + "-hand side has no simple form");
  const auto fam = reduce_implication(*l, *r);
  for (std::size_t i = 0; i < fam.size(); ++i) {
    out.line(to_string(fam[i]));
    out.record({{"command", "reduce"}, {"index", i}, {"implication", to_string(fam[i])}});
  }
  return 0;
}

int cmd_graph(const Globals& g, const std::string& path, const std::string& output) {
  const ImplicationInput in = load_implication(path);
  const auto fam = family_of(in);
  std::string dot;
  for (const auto& f : fam) dot += to_dot(compute_layout(f), &f);
  if (!output.empty()) {
    std::ofstream o(output);
    if (!o) throw InputError("cannot write " + output);
    o << dot;
    return 0;
  }
  if (g.format == Format::Structured) {
    for (std::size_t i = 0; i < fam.size(); ++i) {
      const LayoutGraph lg = compute_layout(fam[i]);
      std::cout << ordered_json{{"command", "graph"}, {"index", i}, {"layout", describe(lg)}, {"dot", to_dot(lg, &fam[i])}}
                       .dump()
                << "\n";
    }
  } else {
    std::cout << dot;
  }
  return 0;
}

ordered_json package_json(const CounterexamplePackage& p, const RecheckResult& rc) {
  return {{"origin", p.origin},
          {"implication", to_string(p.impl)},
          {"rho", to_string(p.binary_rho)},
          {"witness", to_string(p.witness)},
          {"witness_in_lhs", rc.witness_in_lhs},
          {"witness_in_rhs", rc.witness_in_rhs},
          {"unary_clear", rc.unary_clear},
          {"unary_candidates", p.unary_candidates},
          {"unary_budget", describe(p.unary_budget)}};
}

void print_package(Out& out, const CounterexamplePackage& p, const RecheckResult& rc) {
  out.line("  counterexample package (" + p.origin + "):");
  out.line("    implication: " + to_string(p.impl));
  out.line("    binary rho:  " + to_string(p.binary_rho));
  out.line("    witness:     " + to_string(p.witness));
  out.line(std::string("    witness in LHS: ") + (rc.witness_in_lhs ? "yes" : "no") +
           ", in RHS: " + (rc.witness_in_rhs ? "yes" : "no"));
  out.line("    unary search: " + std::string(rc.unary_clear ? "no counterexample" : "COUNTEREXAMPLE FOUND") +
           " among " + std::to_string(p.unary_candidates) + " environments (" + describe(p.unary_budget) + ")");
}

int cmd_lift(const Globals& g, const std::string& path, bool with_dot, bool search) {
  Out out(g.format);
  const ImplicationInput in = load_implication(path);
  const auto fam = family_of(in);
  bool all = true;
  for (std::size_t i = 0; i < fam.size(); ++i) {
    const ImplicationForm& f = fam[i];
    const LayoutGraph lg = compute_layout(f);
    const LiftVerdict v = lift_check(lg);
    all = all && v.lifts;
    if (fam.size() > 1) out.line("implication " + std::to_string(i + 1) + " of " + std::to_string(fam.size()));
    out.line("implication: " + to_string(f));
    out.line("layout: " + describe(lg));
    out.line("verdict: " + v.label());
    ordered_json j{{"command", "lift"}, {"index", i},           {"implication", to_string(f)},
                   {"layout", describe(lg)}, {"verdict", v.label()}, {"lifts", v.lifts}};
    if (!v.lifts) {
      out.line("  shadow: " + v.shadow.diagnostic);
      out.line("  balloon: " + v.balloon.diagnostic);
      out.line("  lonely: " + v.lonely.diagnostic);
      j["diagnostics"] = {{"shadow", v.shadow.diagnostic},
                          {"balloon", v.balloon.diagnostic},
                          {"lonely", v.lonely.diagnostic}};
      if (search && !v.undecided) {
        const WitnessSearchReport r = witness_search(lg, &f);
        if (r.package) {
          const RecheckResult rc = recheck(*r.package);
          print_package(out, *r.package, rc);
          j["counterexample"] = package_json(*r.package, rc);
        } else {
          out.line("  no counterexample package: " + r.note);
          j["counterexample"] = nullptr;
          j["search_note"] = r.note;
        }
      }
      out.line(std::string(kNoGuaranteeNote));
      j["note"] = kNoGuaranteeNote;
    } else if (v.criterion == Criterion::Balloon) {
      j["balloon_set"] = v.balloon_set;
    }
    if (with_dot) {
      const std::string dot = to_dot(lg, &f);
      if (out.text()) std::cout << dot;
      j["dot"] = dot;
    }
    out.record(j);
    out.dot(to_dot(lg, &f));
  }
  return all ? 0 : 1;
}

int cmd_chk(const Globals& g, const std::string& path) {
  Out out(g.format);
  const ImplicationInput in = load_implication(path);
  const ChkReport r = chk(in.lhs, in.rhs);
  out.line(r.headline());
  ordered_json j{{"command", "chk"}, {"headline", r.headline()}, {"ok", r.ok}, {"reason", r.reason}};
  for (std::size_t i = 0; i < r.family.size(); ++i) {
    const std::string label = i < r.verdicts.size() ? r.verdicts[i].label() : "";
    out.line("  " + to_string(r.family[i]) + " : " + label);
    j["family"].push_back({{"implication", to_string(r.family[i])}, {"verdict", label}});
  }
  if (!r.ok) {
    if (!r.reason.empty()) out.line("  reason: " + r.reason);
    out.line(std::string(kNoGuaranteeNote));
    j["note"] = kNoGuaranteeNote;
  }
  out.record(j);
  return r.ok ? 0 : 1;
}

int cmd_search(const Globals& g, const std::string& path) {
  Out out(g.format);
  const ImplicationInput in = load_implication(path);
  const SearchBudget b = budget(g);
  const ValueDomain dom = domain(g);
  const SearchReport r = find_counter_env(in.lhs, in.rhs, in.env, g.arity, b, dom);
  ordered_json j{{"command", "search"},   {"arity", g.arity}, {"budget", describe(b)},
                 {"candidates", r.candidates}, {"found", r.found.has_value()}};
  if (r.found) {
    out.line("counterexample at arity " + std::to_string(g.arity) + " after " + std::to_string(r.candidates) +
             " environments");
    out.line("  rho:     " + to_string(r.found->rho));
    out.line("  witness: " + to_string(r.found->witness));
    j["rho"] = to_string(r.found->rho);
    j["witness"] = to_string(r.found->witness);
  } else {
    out.line("no counterexample at arity " + std::to_string(g.arity) + " among " + std::to_string(r.candidates) +
             " environments (" + describe(b) + ")");
  }
  out.record(j);
  return r.found ? 1 : 0;
}

int cmd_pc(const Globals& g, const std::string& path) {
  Out out(g.format);
  const ImplicationInput in = load_implication(path);
  const auto fam = family_of(in);
  SearchBudget b = budget(g);
  const ValueDomain dom = domain(g);
  bool all = true;
  for (std::size_t i = 0; i < fam.size(); ++i) {
    const PcVerdict v = pc_check(fam[i], in.env, b, dom);
    all = all && v.holds;
    ordered_json j{{"command", "pc"},       {"index", i},      {"implication", to_string(fam[i])},
                   {"holds", v.holds}, {"heaps_checked", v.heaps_checked}};
    out.line(to_string(fam[i]));
    if (v.holds) {
      out.line("  parametricity condition holds on " + std::to_string(v.heaps_checked) + " heaps (" + describe(b) +
               ")");
    } else {
      const PcWitness& w = *v.witness;
      std::string parts;
      for (const auto& p : w.parts) parts += (parts.empty() ? "" : ", ") + to_string(p);
      out.line("  parametricity condition fails at h = " + to_string(w.h) + " with parts " + parts);
      j["h"] = to_string(w.h);
      j["parts"] = parts;
      const PcRefutation ref = pc_counter_env(fam[i], w, dom);
      out.line("  refutation at arity " + std::to_string(ref.arity) + ": rho " + to_string(ref.rho));
      out.line("    witness " + to_string(ref.witness));
      j["refutation"] = {{"arity", ref.arity}, {"rho", to_string(ref.rho)}, {"witness", to_string(ref.witness)}};
    }
    out.record(j);
  }
  return all ? 0 : 1;
}

int cmd_prove(const Globals& g, const std::string& path) {
  Out out(g.format);
  const Scenario s = load_scenario(path);
  const ProofVerdict v = prove_scenario(s);
  out.line(v.summary());
  std::string node;
  for (std::size_t k : v.node) node += (node.empty() ? "" : ".") + std::to_string(k + 1);
  ordered_json j{{"command", "prove"}, {"accepted", v.accepted}, {"summary", v.summary()},
                 {"consequences", v.consequences}};
  if (!v.accepted) {
    j["rule"] = to_string(v.rule);
    j["node"] = node;
    j["reason"] = v.reason;
  }
  out.record(j);
  return v.accepted ? 0 : 1;
}

int cmd_validity(const Globals& g, const std::string& path) {
  Out out(g.format);
  const Scenario s = load_scenario(path);
  const ValidityReport r = scenario_validity(s);
  out.line(r.summary(s.context));
  ordered_json j{{"command", "validity"},
                 {"violated", r.violated},
                 {"pairs_checked", r.pairs_checked},
                 {"frames_checked", r.frames_checked},
                 {"summary", r.summary(s.context)}};
  if (r.violation) {
    const Violation& v = *r.violation;
    auto heap = [](const std::optional<Heap>& h) { return h ? to_string(*h) : std::string("err"); };
    j["triple"] = v.triple < 0 ? std::string("client") : s.context[static_cast<std::size_t>(v.triple)].op;
    j["inputs"] = {to_string(v.f), to_string(v.g)};
    j["outputs"] = {heap(v.out_f), heap(v.out_g)};
  }
  out.record(j);
  return r.violated ? 1 : 0;
}

int cmd_demo(const Globals& g, const std::string& name) {
  const auto known = demo_names();
  if (std::find(known.begin(), known.end(), name) == known.end()) {
    std::string list;
    for (const auto& n : known) list += (list.empty() ? "" : ", ") + n;
    throw InputError("unknown demo '" + name + "'; available scenarios: " + list);
  }
  const DemoResult r = demo(name);
  if (g.format == Format::Structured) {
    std::cout << ordered_json{{"command", "demo"}, {"name", name}, {"ok", r.ok}, {"report", r.report}}.dump() << "\n";
  } else {
    std::cout << r.report;
  }
  return r.ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"liftsl: lifting separation-logic implications with assertion variables to relational "
               "interpretations"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--locs", g.locs, "Largest heap location considered")->check(CLI::PositiveNumber);
  app.add_option("--vals", g.vals, "Comma-separated values for generator heaps in searches");
  app.add_option("--domain", g.domain, "Comma-separated value domain for quantifiers and E |-> _");
  app.add_option("--gens", g.gens, "Most generators per candidate relation")->check(CLI::PositiveNumber);
  app.add_option("--heap-size", g.heap_size, "Most cells per generator heap")->check(CLI::PositiveNumber);
  app.add_option("--arity", g.arity, "Interpretation arity n for `search`")->check(CLI::PositiveNumber);
  app.add_option("--threads", g.threads, "Worker threads for searches")->check(CLI::PositiveNumber);
  const std::map<std::string, Format> formats{
      {"text", Format::Text}, {"structured", Format::Structured}, {"dot", Format::Dot}};
  app.add_option("--format", g.format, "Output format: text, structured (JSON lines) or dot")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));

  std::string path, output, name;
  bool with_dot = false, no_search = false;

  auto* parse = app.add_subcommand("parse", "Parse an implication file or scenario file and print it back "
                                            "(assertion language and command grammar)");
  parse->add_option("file", path)->required();
  auto* normalize = app.add_subcommand("normalize", "Rewrite each side to a simple assertion: a disjunction of "
                                                    "conjunctions of variable-free base * assertion variables");
  normalize->add_option("file", path)->required();
  auto* reduce = app.add_subcommand("reduce", "Reduce an implication between simple assertions to the family of "
                                              "canonical implications (conjuncts |= disjuncts)");
  reduce->add_option("file", path)->required();
  auto* graph = app.add_subcommand("graph", "Write the bipartite layout graph (count vectors, solid and dashed "
                                            "edges) of each canonical implication as DOT");
  graph->add_option("file", path)->required();
  graph->add_option("-o,--output", output, "Write to this file instead of stdout");
  auto* lift = app.add_subcommand("lift", "Decide lifting with the Shadow, Balloon and Lonely layout criteria; on "
                                          "NoGuarantee, search for a binary counterexample package");
  lift->add_option("file", path)->required();
  lift->add_flag("--dot", with_dot, "Also print the layout graph");
  lift->add_flag("--no-search", no_search, "Skip the counterexample search");
  auto* chkc = app.add_subcommand("chk", "Run the consequence-rule gate CHK on an assertion pair: simple forms, "
                                         "reduction, then the lifting criteria");
  chkc->add_option("file", path)->required();
  auto* search = app.add_subcommand("search", "Search bounded n-ary environments for a counterexample to the "
                                              "implication (finitely generated relational semantics)");
  search->add_option("file", path)->required();
  auto* pc = app.add_subcommand("pc", "Check the parametricity condition on each canonical implication and "
                                      "build an n-ary refutation when it fails");
  pc->add_option("file", path)->required();
  auto* prove = app.add_subcommand("prove", "Check the annotated client proof of a scenario with the Hoare rules "
                                            "(consequence gated by CHK, frame, call, write, read, sequence)");
  prove->add_option("file", path)->required();
  auto* validity = app.add_subcommand("validity", "Test 2-validity of a scenario: context triples and the client "
                                                  "under both implementations and the coupling");
  validity->add_option("file", path)->required();
  auto* democ = app.add_subcommand("demo", "Run a packaged representation-independence scenario: counter or "
                                           "goodbad");
  democ->add_option("name", name)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (g.format == Format::Dot && !*graph && !*lift) throw InputError("--format dot applies to graph and lift");
    if (*parse) return cmd_parse(g, path);
    if (*normalize) return cmd_normalize(g, path);
    if (*reduce) return cmd_reduce(g, path);
    if (*graph) return cmd_graph(g, path, output);
    if (*lift) return cmd_lift(g, path, with_dot, !no_search);
    if (*chkc) return cmd_chk(g, path);
    if (*search) return cmd_search(g, path);
    if (*pc) return cmd_pc(g, path);
    if (*prove) return cmd_prove(g, path);
    if (*validity) return cmd_validity(g, path);
    if (*democ) return cmd_demo(g, name);
  } catch (const FileError& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const ParseError& e) {
    std::cerr << "error: " << path << ":" << e.what() << "\n";
  } catch (const ShapeError& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return 2;
}
