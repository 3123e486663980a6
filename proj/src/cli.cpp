#include "nrc/cli.hpp"

#include <fstream>
#include <functional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "nrc/erasure.hpp"
#include "nrc/eval.hpp"
#include "nrc/rewrite.hpp"
#include "nrc/sql.hpp"
#include "nrc/suites.hpp"
#include "nrc/syntax.hpp"

namespace nrc {
namespace {

// A diagnostic tagged with the pipeline stage that raised it.
struct StageError {
  std::string stage;
  Error error;
};

template <typename F>
auto stage(const std::string& name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    throw StageError{name, e};
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("IoError", "cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Calculus parse_calculus(const std::string& name) {
  if (name == "het" || name == "heterogeneous") return Calculus::kHeterogeneous;
  if (name == "di" || name == "delta-iota") return Calculus::kDeltaIota;
  throw Error("BadCalculus", "unknown calculus '" + name + "' (expected het or di)");
}

Fragment parse_fragment(const std::string& name) {
  if (name == "het" || name == "heterogeneous") return Fragment::kHeterogeneous;
  if (name == "di" || name == "delta-iota") return Fragment::kDeltaIota;
  if (name == "set" || name == "set-only") return Fragment::kSetOnly;
  throw Error("BadFragment", "unknown fragment '" + name + "' (expected set, di or het)");
}

struct Options {
  bool json = false;
  std::string file;
  std::string calculus = "het";
  std::string strategy = "lo";
  std::size_t fuel = kDefaultFuel;
  bool trace = false;
  std::string db;
  std::string suite;
  std::size_t n = 100;
  std::uint64_t seed = 1;
  std::size_t size = 0;
  std::string fragment = "het";
  bool capture = false;
};

class Runner {
 public:
  Runner(const Options& opt, std::ostream& out) : opt_(opt), out_(out) {}

  void emit(const nlohmann::json& record, const std::string& text) {
    if (opt_.json)
      out_ << record.dump() << "\n";
    else
      out_ << text << "\n";
  }

  TypedTerm load(const TypeEnv* db_env = nullptr) {
    Calculus calc = stage("parse", [&] { return parse_calculus(opt_.calculus); });
    std::string text = stage("read", [&] { return read_file(opt_.file); });
    Program prog = stage("parse", [&] { return parse_program(text); });
    return stage("check", [&] {
      TypeEnv env;
      if (db_env != nullptr) env = *db_env;
      for (const TableDecl& d : prog.tables) {
        const Type* have = env.lookup(d.name);
        if (db_env != nullptr && have == nullptr)
          throw Error("MissingTable", "table '" + d.name + "' is not in the database", d.span);
        if (have != nullptr && *have != d.type)
          throw Error("TableMismatch",
                      "table '" + d.name + "' is declared " + d.type.to_string() + " but the database has " +
                          have->to_string(),
                      d.span);
        env.bind(d.name, d.type);
      }
      return typed(env, prog.term, calc);
    });
  }

  int check() {
    TypedTerm t = load();
    emit({{"event", "type"}, {"type", t.type.to_string()}}, t.type.to_string());
    return 0;
  }

  int normalize_cmd() {
    TypedTerm t = load();
    Strategy s = stage("normalize", [&] { return Strategy::parse(opt_.strategy); });
    NormalizeResult r = stage("normalize", [&] { return normalize(t, s, opt_.fuel, opt_.trace); });
    for (std::size_t i = 0; i < r.trace.size(); ++i) {
      const ReductStep& st = r.trace[i];
      emit({{"event", "step"},
            {"index", i + 1},
            {"rule", rule_name(st.rule)},
            {"position", path_to_string(st.position)},
            {"term", print_term(st.after)}},
           trace_line(i + 1, st));
    }
    std::vector<Term> forms = r.normal_forms.empty() ? std::vector<Term>{r.normal_form} : r.normal_forms;
    for (const Term& nf : forms)
      emit({{"event", "normal_form"}, {"term", print_term(nf)}, {"steps", r.steps}}, print_term(nf));
    return 0;
  }

  int eval_cmd() {
    Database db = stage("database", [&] { return Database::load(opt_.db); });
    TypeEnv env = db.type_env();
    TypedTerm t = load(&env);
    Value v = stage("eval", [&] { return eval(db.values(), t.term, t.calculus); });
    emit({{"event", "value"}, {"value", value_to_json(v)}, {"text", value_to_string(v)}}, value_to_string(v));
    return 0;
  }

  int sql() {
    TypedTerm t = load();
    Term nf = stage("normalize", [&] { return normalize(t, Strategy::leftmost_outermost(), opt_.fuel).normal_form; });
    SqlQuery q = stage("recognize", [&] { return recognize(TypedTerm{nf, t.env, t.type, t.calculus}); });
    std::string text = stage("emit", [&] { return to_sql(q); });
    emit({{"event", "sql"}, {"sql", text}}, text);
    return 0;
  }

  int erase() {
    TypedTerm t = load();
    if (t.calculus != Calculus::kHeterogeneous)
      throw StageError{"erase", Error("BadCalculus", "erasure translates heterogeneous terms")};
    Term e = erase_term(t.term);
    Type ty = stage("check", [&] { return infer(erase_env(t.env), e, Calculus::kDeltaIota); });
    emit({{"event", "erased"}, {"term", print_term(e)}, {"type", ty.to_string()}}, print_term(e));
    return 0;
  }

  int meta() {
    SuiteConfig cfg;
    cfg.seed = opt_.seed;
    cfg.n = opt_.n;
    cfg.size = opt_.size;
    cfg.capture = opt_.capture;
    cfg.fragment = stage("meta", [&] { return parse_fragment(opt_.fragment); });
    SuiteReport rep = stage("meta", [&] { return run_suite(opt_.suite, cfg); });
    if (opt_.json) {
      for (const InstanceResult& r : rep.instances)
        out_ << nlohmann::json{{"event", "instance"}, {"suite", rep.suite}, {"seed", r.seed},
                               {"ok", r.ok},          {"skipped", r.skipped}, {"detail", r.detail}}
                    .dump()
             << "\n";
      out_ << nlohmann::json{{"event", "summary"}, {"suite", rep.suite}, {"checked", rep.checked()},
                             {"failures", rep.failures()}, {"stats", rep.stats}}
                  .dump()
           << "\n";
    } else {
      out_ << rep.tap();
    }
    return rep.failures() == 0 ? 0 : 1;
  }

 private:
  const Options& opt_;
  std::ostream& out_;
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"Normalizing compiler for nested relational queries over sets and bags", "nrc"};
  app.require_subcommand(1);
  app.add_flag("--json", opt.json, "Line-delimited JSON records for results and diagnostics");

  auto with_file = [&](CLI::App* sub) {
    sub->add_option("file", opt.file, "Source file: table declarations followed by one term")->required();
    sub->add_option("--calculus", opt.calculus, "het (sets and bags) or di (delta-iota)");
    return sub;
  };
  CLI::App* check = with_file(app.add_subcommand("check", "Type-check and print the type"));
  CLI::App* norm = with_file(app.add_subcommand("normalize", "Print the normal form"));
  norm->add_option("--strategy", opt.strategy, "lo | random:SEED | exhaustive");
  norm->add_option("--fuel", opt.fuel, "Step budget");
  norm->add_flag("--trace", opt.trace, "Print every step");
  CLI::App* ev = with_file(app.add_subcommand("eval", "Evaluate over a JSON database"));
  ev->add_option("--db", opt.db, "Database file")->required();
  CLI::App* sql = with_file(app.add_subcommand("sql", "Normalize and emit SQL"));
  CLI::App* erase = with_file(app.add_subcommand("erase", "Print the delta-iota erasure"));
  CLI::App* meta = app.add_subcommand("meta", "Run a property suite (TAP output)");
  meta->add_option("--suite", opt.suite, "Suite name")->required()->check(CLI::IsMember(suite_names()));
  meta->add_option("--n", opt.n, "Instances");
  meta->add_option("--seed", opt.seed, "First seed");
  meta->add_option("--size", opt.size, "Maximum term size (0: suite default)");
  meta->add_option("--fragment", opt.fragment, "set, di or het");
  meta->add_flag("--capture", opt.capture, "classify: plugged terms may be captured");

  std::vector<std::string> argv_store{"nrc"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (std::string& a : argv_store) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "usage: " << e.what() << "\n" << app.help();
    return 2;
  }

  Runner run(opt, out);
  try {
    if (check->parsed()) return run.check();
    if (norm->parsed()) return run.normalize_cmd();
    if (ev->parsed()) return run.eval_cmd();
    if (sql->parsed()) return run.sql();
    if (erase->parsed()) return run.erase();
    if (meta->parsed()) return run.meta();
  } catch (const StageError& s) {
    if (opt.json) {
      nlohmann::json j = nlohmann::json::parse(s.error.diagnostic_json());
      j["stage"] = s.stage;
      err << j.dump() << "\n";
    } else {
      err << s.error.diagnostic() << " [stage " << s.stage << "]\n";
    }
    return 1;
  } catch (const Error& e) {
    err << (opt.json ? e.diagnostic_json() : e.diagnostic()) << "\n";
    return 1;
  }
  return 2;
}

}  // namespace nrc
