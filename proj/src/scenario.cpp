#include "lf/scenario.hpp"

#include <map>
#include <sstream>

#include <json.hpp>

#include "lf/render.hpp"

namespace lf {

namespace {

using nlohmann::json;

std::string actors_string(const std::vector<std::string>& actors) {
  std::string out = "{";
  for (size_t i = 0; i < actors.size(); ++i) {
    if (i) out += ",";
    out += actors[i];
  }
  return out + "}";
}

std::string command_string(const Command& cmd) {
  if (cmd.tag == Command::Tag::Create)
    return "create " + cmd.template_ref.str();
  return "exercise " + cmd.cid_ref + " " + cmd.template_ref.str() + "." +
         cmd.choice;
}

bool match_sketch(const std::vector<TreeSketch>& sketch, const Transaction& tx) {
  if (sketch.size() != tx.size()) return false;
  for (size_t i = 0; i < sketch.size(); ++i) {
    const TreeSketch& s = sketch[i];
    bool ok = std::visit(
        [&](const auto& n) -> bool {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, CreateA>) {
            return s.tag == TreeSketch::Tag::Create && s.cid == n.cid &&
                   s.children.empty();
          } else if constexpr (std::is_same_v<T, ExerciseA>) {
            return s.tag == TreeSketch::Tag::Exercise && s.cid == n.cid &&
                   match_sketch(s.children, n.consequences);
          } else {
            return s.tag == TreeSketch::Tag::Fetch && s.cid == n.cid &&
                   s.children.empty();
          }
        },
        tx[i]->node);
    if (!ok) return false;
  }
  return true;
}

struct Runner {
  const PackageStore& store;
  const RunOptions& opts;
  Ledger ledger;
  std::map<std::string, std::int64_t> binds;
  RunReport report;
  json steps = json::array();

  Runner(const PackageStore& s, const RunOptions& o)
      : store(s), opts(o), ledger(s) {}

  void line(const std::string& s) { report.lines.push_back(s); }

  void fail_step(json& j, const std::string& msg) {
    j["ok"] = false;
    j["detail"] = msg;
    line("FAIL: " + msg);
    report.exit_code = 2;
  }

  ValuePtr build_update(const Command& cmd) {
    Env env;
    for (const auto& [name, cid] : binds)
      env = env.extend(name, mk_value(ContractIdV{cid}));
    ExprPtr e;
    if (cmd.tag == Command::Tag::Create) {
      e = mk_expr(EUpdateCreate{cmd.template_ref, cmd.arg});
    } else {
      ExprPtr cid = mk_expr(EVar{cmd.cid_ref});
      e = mk_expr(EUpdateExercise{cmd.template_ref, cmd.choice, cid, cmd.arg});
    }
    Interpreter interp(store);
    return interp.eval(env, e);
  }

  void run_submit(const ScenarioStep& st, json& j) {
    std::set<std::string> actors(st.actors.begin(), st.actors.end());
    std::string head =
        "submit " + actors_string(st.actors) + " " + command_string(st.command);
    Ledger::SubmitResult r;
    try {
      r = ledger.submit(actors, build_update(st.command));
    } catch (const RuntimeError& err) {
      fail_step(j, head + " => " + err.render());
      return;
    }
    std::string result = value_to_string(r.value);
    line(head + " => " + result);
    j["ok"] = true;
    j["result"] = result;
    j["tree"] = render_transaction(r.tx);
    if (!st.bind_name.empty()) {
      auto* cid = std::get_if<ContractIdV>(&r.value->node);
      if (!cid) {
        fail_step(j, "bind '" + st.bind_name +
                         "': command result is not a contract id");
        return;
      }
      binds[st.bind_name] = cid->id;
    }
    if (opts.trace)
      for (const auto& l : split_lines(render_transaction(r.tx))) line("  " + l);
    if (!opts.project_party.empty()) {
      line("  projection for " + opts.project_party + ":");
      Transaction view = project_transaction(r.tx, opts.project_party);
      for (const auto& l : split_lines(render_transaction(view)))
        line("    " + l);
    }
  }

  void run_must_fail(const ScenarioStep& st, json& j) {
    std::set<std::string> actors(st.actors.begin(), st.actors.end());
    std::string head = "submit-must-fail " + actors_string(st.actors) + " " +
                       command_string(st.command);
    try {
      ledger.submit(actors, build_update(st.command));
    } catch (const RuntimeError& err) {
      std::string cls = runtime_error_class_name(err.cls);
      if (cls == st.expected_error) {
        line(head + " => failed as expected (" + cls + ")");
        j["ok"] = true;
        j["error"] = cls;
      } else {
        fail_step(j, head + " => failed with " + err.render() + ", expected " +
                         st.expected_error);
      }
      return;
    }
    fail_step(j, head + " => committed, but " + st.expected_error +
                     " was expected");
  }

  void run_assert(const ScenarioStep& st, json& j) {
    auto bind = binds.find(st.cid_ref);
    if (bind == binds.end()) {
      fail_step(j, "unknown bind '" + st.cid_ref + "'");
      return;
    }
    auto it = ledger.state().contracts.find(bind->second);
    std::string cid = "#" + std::to_string(bind->second);
    if (it == ledger.state().contracts.end()) {
      fail_step(j, "no contract " + cid);
      return;
    }
    if (st.tag == ScenarioStep::Tag::AssertActive) {
      if (!it->second.active) {
        fail_step(j, "assert-active " + cid + ": contract is archived");
      } else if (!(it->second.tmpl == st.expected_template)) {
        fail_step(j, "assert-active " + cid + ": contract is a " +
                         it->second.tmpl.str() + ", not a " +
                         st.expected_template.str());
      } else {
        line("assert-active " + cid + " " + st.expected_template.str() +
             " => ok");
        j["ok"] = true;
      }
    } else {
      if (it->second.active) {
        fail_step(j, "assert-archived " + cid + ": contract is active");
      } else {
        line("assert-archived " + cid + " => ok");
        j["ok"] = true;
      }
    }
  }

  void run_project(const ScenarioStep& st, json& j) {
    Transaction view = ledger.projection(st.party);
    std::string rendered = render_transaction(view);
    line("project " + st.party + ":");
    for (const auto& l : split_lines(rendered)) line("  " + l);
    j["view"] = rendered;
    if (st.has_sketch && !match_sketch(st.expected, view)) {
      fail_step(j, "projection for " + st.party +
                       " does not match the expected shape");
      return;
    }
    j["ok"] = true;
  }

  static std::vector<std::string> split_lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string l;
    while (std::getline(is, l)) out.push_back(l);
    return out;
  }

  RunReport run(const Scenario& scenario) {
    static const char* kKinds[] = {"submit", "submit-must-fail",
                                   "assert-active", "assert-archived",
                                   "project"};
    for (const ScenarioStep& st : scenario.steps) {
      json j;
      j["kind"] = kKinds[static_cast<int>(st.tag)];
      switch (st.tag) {
        case ScenarioStep::Tag::Submit: run_submit(st, j); break;
        case ScenarioStep::Tag::SubmitMustFail: run_must_fail(st, j); break;
        case ScenarioStep::Tag::AssertActive:
        case ScenarioStep::Tag::AssertArchived: run_assert(st, j); break;
        case ScenarioStep::Tag::Project: run_project(st, j); break;
      }
      steps.push_back(j);
      if (report.exit_code != 0) break;  // stop at the first failing step
    }
    json active = json::array();
    for (const auto& [cid, c] : ledger.state().contracts)
      if (c.active)
        active.push_back({{"cid", cid}, {"template", c.tmpl.str()}});
    json root = {{"ok", report.exit_code == 0},
                 {"exit_code", report.exit_code},
                 {"steps", steps},
                 {"active", active}};
    report.json_text = root.dump(2);
    std::string actives = "active:";
    for (const auto& [cid, c] : ledger.state().contracts)
      if (c.active) actives += " #" + std::to_string(cid) + "=" + c.tmpl.str();
    line(actives);
    return std::move(report);
  }
};

}  // namespace

RunReport run_scenario(const PackageStore& store, const Scenario& scenario,
                       const RunOptions& opts) {
  Runner r(store, opts);
  return r.run(scenario);
}

}  // namespace lf
