#include "qcsp/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "qcsp/containment.hpp"
#include "qcsp/entailment.hpp"
#include "qcsp/errors.hpp"
#include "qcsp/game.hpp"
#include "qcsp/generators.hpp"
#include "qcsp/hom.hpp"
#include "qcsp/parser.hpp"
#include "qcsp/qcore.hpp"
#include "qcsp/structure_io.hpp"

namespace qcsp::cli {

namespace {

PhSentence read_sentence_file(const std::string& path) {
  try {
    return parse_sentence(read_text_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void write_output(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write '" + path + "'");
  f << text << "\n";
}

std::string power_label(const Structure& a, int r, int index) {
  std::string s = "(";
  bool first = true;
  for (int c : power_coordinates(index, a.size(), r)) {
    if (!first) s += ",";
    s += a.label(c);
    first = false;
  }
  return s + ")";
}

Json power_mapping_json(const Structure& a, int r, const Structure& b,
                        const std::vector<int>& mapping) {
  Json j = Json::object();
  for (std::size_t i = 0; i < mapping.size(); ++i) {
    std::string key = r == 1 ? a.label(static_cast<int>(i))
                             : power_label(a, r, static_cast<int>(i));
    j[key] = b.label(mapping[i]);
  }
  return j;
}

Json verdict_json(const ContainmentVerdict& v, const Structure& a, const Structure& b) {
  Json j = Json::object();
  j["outcome"] = to_string(v.outcome);
  if (v.outcome == Outcome::kYes) j["exponent"] = v.exponent;
  j["bound"] = v.bound;
  j["bound_kind"] = to_string(v.bound_kind);
  if (v.outcome == Outcome::kInconclusive) j["cap"] = v.cap;
  if (v.witness) j["witness"] = power_mapping_json(a, v.exponent, b, v.witness->mapping);
  j["diagnostics"] = v.diagnostics;
  return j;
}

int verdict_code(Outcome o) {
  switch (o) {
    case Outcome::kYes: return kPositive;
    case Outcome::kNo: return kNegative;
    case Outcome::kInconclusive: return kInconclusive;
  }
  return kInconclusive;
}

void print_mapping(std::ostream& out, const Json& mapping) {
  for (auto it = mapping.begin(); it != mapping.end(); ++it) {
    out << "  " << it.key() << " -> " << it.value().get<std::string>() << "\n";
  }
}

Json spec_json(const Structure& a, const SubstructureSpec& spec) {
  Json j = Json::object();
  Json elems = Json::array();
  for (int e : spec.elements) elems.push_back(a.label(e));
  j["elements"] = elems;
  Json rels = Json::object();
  for (std::size_t r = 0; r < spec.tuples.size(); ++r) {
    const int arity = a.relation(r).arity();
    Json tuples = Json::array();
    for (std::size_t i = 0; i < spec.tuples[r].size(); i += static_cast<std::size_t>(arity)) {
      Json t = Json::array();
      for (int k = 0; k < arity; ++k) {
        t.push_back(a.label(spec.tuples[r][i + static_cast<std::size_t>(k)]));
      }
      tuples.push_back(t);
    }
    rels[a.signature().relation(r).name] = tuples;
  }
  j["tuples"] = rels;
  return j;
}

struct Common {
  bool json = false;
  std::optional<std::uint64_t> seed;  // reserved
};

// --- subcommands -------------------------------------------------------------

struct EvalArgs {
  std::string structure, sentence;
  bool strategy = false;
};

int do_eval(const EvalArgs& args, const Common& common, std::ostream& out) {
  Structure a = read_structure_file(args.structure);
  PhSentence s = read_sentence_file(args.sentence);
  EvaluateOptions opts;
  opts.want_strategy = args.strategy;
  GameResult r = evaluate(a, s, opts);
  if (common.json) {
    Json j = {{"value", r.value}};
    if (r.strategy) {
      Json moves = Json::array();
      auto flat = s.flat_prefix();
      for (const auto& [key, value] : *r.strategy) {
        Json history = Json::array();
        for (int v : key.second) history.push_back(a.label(v));
        moves.push_back({{"variable", flat[static_cast<std::size_t>(key.first)].name},
                         {"history", history},
                         {"choice", a.label(value)}});
      }
      j["strategy"] = moves;
    }
    out << j.dump(2) << "\n";
  } else {
    out << (r.value ? "true" : "false") << "\n";
    if (r.strategy) {
      auto flat = s.flat_prefix();
      for (const auto& [key, value] : *r.strategy) {
        out << "  " << flat[static_cast<std::size_t>(key.first)].name << " [";
        for (std::size_t i = 0; i < key.second.size(); ++i) {
          out << (i ? "," : "") << a.label(key.second[i]);
        }
        out << "] -> " << a.label(value) << "\n";
      }
    }
  }
  return r.value ? kPositive : kNegative;
}

struct ContainArgs {
  std::string a, b;
  bool witness = false;
  std::string bound = "auto";
  std::optional<std::int64_t> cap;
  int start = 1;
  std::int64_t max_elements = 1'000'000;
};

ContainmentOptions containment_options(const std::string& bound,
                                       std::optional<std::int64_t> cap,
                                       std::int64_t max_elements) {
  ContainmentOptions opts;
  opts.cap = cap;
  opts.limits.max_elements = max_elements;
  if (bound == "auto") {
    opts.bound_mode = BoundMode::kAuto;
  } else if (bound == "orbit") {
    opts.bound_mode = BoundMode::kOrbit;
  } else if (bound == "cardinality") {
    opts.bound_mode = BoundMode::kCardinality;
  } else {
    std::int64_t n = 0;
    std::istringstream in(bound);
    if (!(in >> n) || !in.eof() || n < 1) {
      throw ParseError("--bound must be orbit, cardinality, auto or a positive integer");
    }
    opts.bound_mode = BoundMode::kFixed;
    opts.fixed_bound = n;
  }
  return opts;
}

int do_contain(const ContainArgs& args, const Common& common, std::ostream& out) {
  ContainmentOptions opts = containment_options(args.bound, args.cap, args.max_elements);
  opts.start_exponent = args.start;
  Structure a = read_structure_file(args.a);
  Structure b = read_structure_file(args.b);
  ContainmentVerdict v = decide_containment(a, b, opts);
  Json j = verdict_json(v, a, b);
  if (common.json) {
    if (!args.witness) j.erase("witness");
    out << j.dump(2) << "\n";
  } else {
    out << to_string(v.outcome);
    if (v.outcome == Outcome::kYes) out << " r=" << v.exponent;
    if (v.outcome == Outcome::kInconclusive) out << " cap=" << v.cap;
    out << " bound=" << v.bound << " (" << to_string(v.bound_kind) << ")\n";
    if (args.witness && v.witness) print_mapping(out, j["witness"]);
    for (const auto& d : v.diagnostics) out << "note: " << d << "\n";
  }
  return verdict_code(v.outcome);
}

struct EntailArgs {
  std::string phi, psi;
  std::int64_t max_terms = 100'000;
  std::int64_t max_states = 10'000'000;
  bool trace = false;
  bool strategy = false;
};

int do_entail(const EntailArgs& args, const Common& common, std::ostream& out) {
  PhSentence phi = read_sentence_file(args.phi);
  PhSentence psi = read_sentence_file(args.psi);
  EntailmentOptions opts;
  opts.truncation.max_terms = args.max_terms;
  opts.max_states = args.max_states;
  opts.want_strategy = args.strategy;
  EntailmentResult r = decide_entailment(phi, psi, opts);
  Json j = Json::object();
  j["verdict"] = to_string(r.verdict);
  j["degenerate"] = r.degenerate;
  if (!r.degenerate) {
    j["l"] = r.l;
    j["rank_bound"] = r.rank_bound;
    j["rank_reached"] = r.rank_reached;
  }
  if (r.strategy && r.truncation) {
    Json moves = Json::array();
    for (const auto& [history, term] : *r.strategy) {
      Json h = Json::array();
      for (int t : history) h.push_back(r.truncation->terms[static_cast<std::size_t>(t)].to_string(&r.truncation->form));
      moves.push_back({{"history", h},
                       {"choice", r.truncation->terms[static_cast<std::size_t>(term)].to_string(&r.truncation->form)}});
    }
    j["strategy"] = moves;
  }
  if (args.trace && r.truncation) {
    j["truncation"] = structure_to_json(r.truncation->to_structure());
  }
  j["diagnostics"] = r.diagnostics;
  if (common.json) {
    out << j.dump(2) << "\n";
  } else {
    out << to_string(r.verdict);
    if (r.degenerate) {
      out << " (degenerate phi: one-element models)";
    } else {
      out << " (rank " << r.rank_reached << " of " << r.rank_bound << ", l=" << r.l << ")";
    }
    out << "\n";
    for (const auto& d : r.diagnostics) out << "note: " << d << "\n";
    if (j.contains("strategy")) {
      for (const auto& m : j["strategy"]) {
        out << "  [";
        bool first = true;
        for (const auto& h : m["history"]) {
          out << (first ? "" : ",") << h.get<std::string>();
          first = false;
        }
        out << "] -> " << m["choice"].get<std::string>() << "\n";
      }
    }
    if (j.contains("truncation")) out << j["truncation"].dump(2) << "\n";
  }
  switch (r.verdict) {
    case EntailmentVerdict::kYes: return kPositive;
    case EntailmentVerdict::kNo: return kNegative;
    case EntailmentVerdict::kResourceExceeded: return kInconclusive;
  }
  return kInconclusive;
}

struct QcoreArgs {
  std::string structure;
  std::string report;
  int max_size = 5;
  std::optional<std::int64_t> cap;
  std::int64_t max_elements = 1'000'000;
};

int do_qcore(const QcoreArgs& args, const Common& common, std::ostream& out) {
  Structure a = read_structure_file(args.structure);
  QcoreOptions opts;
  opts.max_input_size = args.max_size;
  opts.containment = containment_options("auto", args.cap, args.max_elements);
  QcoreReport r = find_qcore(a, opts);
  Json j = Json::object();
  j["found"] = r.found;
  j["inconclusive"] = r.inconclusive;
  if (r.found) {
    j["induced"] = r.is_induced;
    j["core"] = structure_to_json(r.core);
    j["forward"] = verdict_json(r.forward, a, r.core);
    j["backward"] = verdict_json(r.backward, r.core, a);
    Json minimality = Json::array();
    for (const auto& c : r.minimality) {
      Json e = spec_json(a, c.spec);
      e["reason"] = c.reason;
      e["failed_direction"] = c.failed_forward ? "input-in-candidate" : "candidate-in-input";
      if (c.sentence) e["sentence"] = to_string(*c.sentence);
      minimality.push_back(e);
    }
    j["minimality"] = minimality;
  }
  j["candidates_examined"] = r.candidates_examined;
  j["diagnostics"] = r.diagnostics;
  if (!args.report.empty()) write_output(args.report, j.dump(2));
  if (common.json) {
    out << j.dump(2) << "\n";
  } else if (r.found) {
    out << "q-core: " << r.core.size() << " elements, " << r.core.tuple_count()
        << " tuples, " << (r.is_induced ? "induced" : "not induced")
        << (r.inconclusive ? " (minimality not fully certified)" : "") << "\n";
    out << format_structure(r.core) << "\n";
  } else {
    out << "no q-core determined\n";
  }
  if (!r.found || r.inconclusive) return kInconclusive;
  return kPositive;
}

struct SurhomArgs {
  std::string a, b;
  bool constants = false;
  int power = 1;
  std::int64_t max_elements = 1'000'000;
};

int do_surhom(const SurhomArgs& args, const Common& common, std::ostream& out) {
  Structure a = read_structure_file(args.a);
  Structure b = read_structure_file(args.b);
  ResourceLimits limits;
  limits.max_elements = args.max_elements;
  Structure src = args.power == 1 ? a : power(a, args.power, limits);
  auto w = find_surjective_hom(src, b, args.constants);
  if (common.json) {
    Json j = {{"present", w.has_value()}};
    if (w) j["witness"] = power_mapping_json(a, args.power, b, w->mapping);
    out << j.dump(2) << "\n";
  } else {
    out << (w ? "present" : "absent") << "\n";
    if (w) print_mapping(out, power_mapping_json(a, args.power, b, w->mapping));
  }
  return w ? kPositive : kNegative;
}

struct ProductArgs {
  std::vector<std::string> inputs;
  int power = 0;
  std::string output;
  std::int64_t max_elements = 1'000'000;
};

int do_product(const ProductArgs& args, const Common&, std::ostream& out) {
  ResourceLimits limits;
  limits.max_elements = args.max_elements;
  std::vector<Structure> parts;
  for (const auto& p : args.inputs) parts.push_back(read_structure_file(p));
  Structure result;
  if (args.power > 0) {
    if (parts.size() != 1) throw ParseError("--power takes exactly one structure");
    result = power(parts[0], args.power, limits);
  } else {
    if (parts.size() < 2) throw ParseError("product needs at least two structures");
    result = parts[0];
    for (std::size_t i = 1; i < parts.size(); ++i) result = product(result, parts[i], limits);
  }
  std::string text = format_structure(result);
  if (args.output.empty()) {
    out << text << "\n";
  } else {
    write_output(args.output, text);
  }
  return kPositive;
}

struct GenArgs {
  std::string family;
  std::vector<std::string> params;
  std::string output;
};

int do_gen(const GenArgs& args, const Common&, std::ostream& out) {
  std::map<std::string, std::string> params;
  for (const auto& p : args.params) {
    auto eq = p.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ParseError("generator parameters are key=value, got '" + p + "'");
    }
    params[p.substr(0, eq)] = p.substr(eq + 1);
  }
  std::string text = format_structure(generate(args.family, params));
  if (args.output.empty()) {
    out << text << "\n";
  } else {
    write_output(args.output, text);
  }
  return kPositive;
}

struct OrbitsArgs {
  std::string structure;
  int n = 1;
  bool list = false;
};

int do_orbits(const OrbitsArgs& args, const Common& common, std::ostream& out) {
  Structure a = read_structure_file(args.structure);
  auto group = automorphisms(a);
  std::uint64_t orbits = orbit_count(a, args.n);
  if (common.json) {
    Json j = {{"automorphisms", group.size()}, {"n", args.n}, {"orbits", orbits}};
    if (args.list) {
      Json perms = Json::array();
      for (const auto& g : group) perms.push_back(mapping_to_json(a, a, g));
      j["group"] = perms;
    }
    out << j.dump(2) << "\n";
  } else {
    out << "automorphisms: " << group.size() << "\n";
    out << "orbits of " << args.n << "-tuples: " << orbits << "\n";
    if (args.list) {
      for (const auto& g : group) {
        out << " ";
        for (std::size_t i = 0; i < g.size(); ++i) out << " " << a.label(g[i]);
        out << "\n";
      }
    }
  }
  return kPositive;
}

struct MajorityArgs {
  std::string structure;
};

int do_majority(const MajorityArgs& args, const Common& common, std::ostream& out) {
  Structure a = read_structure_file(args.structure);
  auto f = find_majority_polymorphism(a);
  if (common.json) {
    Json j = {{"present", f.has_value()}};
    if (f) j["polymorphism"] = power_mapping_json(a, 3, a, *f);
    out << j.dump(2) << "\n";
  } else {
    out << (f ? "present" : "absent") << "\n";
    if (f) print_mapping(out, power_mapping_json(a, 3, a, *f));
  }
  return f ? kPositive : kNegative;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantified constraint satisfaction: containment, entailment, Q-cores",
               "qcsp"};
  app.require_subcommand(1);
  Common common;
  app.add_flag("--json", common.json, "Machine-readable JSON output");
  app.add_option("--seed", common.seed, "Reserved; the core paths are deterministic");

  EvalArgs eval;
  auto* c_eval = app.add_subcommand("eval", "Evaluate a sentence on a structure");
  c_eval->add_option("structure", eval.structure)->required();
  c_eval->add_option("sentence", eval.sentence)->required();
  c_eval->add_flag("--strategy", eval.strategy, "Print Existential's winning strategy");

  ContainArgs contain;
  auto* c_contain = app.add_subcommand("contain", "Decide QCSP(A) in QCSP(B)");
  c_contain->add_option("a", contain.a)->required();
  c_contain->add_option("b", contain.b)->required();
  c_contain->add_flag("--witness", contain.witness, "Print the surjection");
  c_contain->add_option("--bound", contain.bound, "orbit, cardinality, auto or N");
  c_contain->add_option("--cap", contain.cap, "Largest exponent to try");
  c_contain->add_option("--start", contain.start, "First exponent")->check(CLI::PositiveNumber);
  c_contain->add_option("--max-elements", contain.max_elements, "Power size cap");

  EntailArgs entail;
  auto* c_entail = app.add_subcommand("entail", "Decide |= phi -> psi");
  c_entail->add_option("phi", entail.phi)->required();
  c_entail->add_option("psi", entail.psi)->required();
  c_entail->add_option("--max-terms", entail.max_terms, "Truncation size cap");
  c_entail->add_option("--max-states", entail.max_states, "Game state cap");
  c_entail->add_flag("--trace", entail.trace, "Dump the deciding truncation");
  c_entail->add_flag("--strategy", entail.strategy, "Print Existential's strategy");

  QcoreArgs qcore;
  auto* c_qcore = app.add_subcommand("qcore", "Compute a Q-core");
  c_qcore->add_option("structure", qcore.structure)->required();
  c_qcore->add_option("--report", qcore.report, "Write the full report as JSON");
  c_qcore->add_option("--max-size", qcore.max_size, "Largest input size");
  c_qcore->add_option("--cap", qcore.cap, "Exponent cap for containment checks");
  c_qcore->add_option("--max-elements", qcore.max_elements, "Power size cap");

  SurhomArgs surhom;
  auto* c_surhom = app.add_subcommand("surhom", "Find a surjective homomorphism A^r ->> B");
  c_surhom->add_option("a", surhom.a)->required();
  c_surhom->add_option("b", surhom.b)->required();
  c_surhom->add_option("--power", surhom.power, "Exponent r")->check(CLI::PositiveNumber);
  c_surhom->add_flag("--constants", surhom.constants, "Preserve constants");
  c_surhom->add_option("--max-elements", surhom.max_elements, "Power size cap");

  ProductArgs prod;
  auto* c_product = app.add_subcommand("product", "Direct product or power");
  c_product->add_option("inputs", prod.inputs)->required();
  c_product->add_option("--power", prod.power, "Power of a single structure")
      ->check(CLI::PositiveNumber);
  c_product->add_option("-o,--output", prod.output, "Output file");
  c_product->add_option("--max-elements", prod.max_elements, "Size cap");

  GenArgs gen;
  auto* c_gen = app.add_subcommand("gen", "Generate a named structure family");
  c_gen->add_option("family", gen.family)->required();
  c_gen->add_option("params", gen.params, "key=value parameters");
  c_gen->add_option("-o,--output", gen.output, "Output file");

  OrbitsArgs orbits;
  auto* c_orbits = app.add_subcommand("orbits", "Automorphisms and orbits of n-tuples");
  c_orbits->add_option("structure", orbits.structure)->required();
  c_orbits->add_option("n", orbits.n)->check(CLI::PositiveNumber);
  c_orbits->add_flag("--list", orbits.list, "List the automorphisms");

  MajorityArgs majority;
  auto* c_majority = app.add_subcommand("majority", "Search for a majority polymorphism");
  c_majority->add_option("structure", majority.structure)->required();

  for (auto* sub : app.get_subcommands({})) {
    sub->add_flag("--json", common.json, "Machine-readable JSON output");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kPositive;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kPositive;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (c_eval->parsed()) return do_eval(eval, common, out);
    if (c_contain->parsed()) return do_contain(contain, common, out);
    if (c_entail->parsed()) return do_entail(entail, common, out);
    if (c_qcore->parsed()) return do_qcore(qcore, common, out);
    if (c_surhom->parsed()) return do_surhom(surhom, common, out);
    if (c_product->parsed()) return do_product(prod, common, out);
    if (c_gen->parsed()) return do_gen(gen, common, out);
    if (c_orbits->parsed()) return do_orbits(orbits, common, out);
    if (c_majority->parsed()) return do_majority(majority, common, out);
  } catch (const ResourceError& e) {
    err << "resource limit: " << e.what() << "\n";
    return kInconclusive;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  err << "error: no subcommand\n";
  return kUsage;
}

}  // namespace qcsp::cli
