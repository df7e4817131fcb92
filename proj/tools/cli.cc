// Copyright 2026 The qb Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "httplib.h"
#include "json.hpp"
#include "qb/rewrite/engine.h"
#include "qb/service/api.h"
#include "qb/service/config.h"
#include "qb/service/server.h"
#include "qb/service/store.h"
#include "qb/sql/parser.h"
#include "qb/sql/schema.h"
#include "qb/sql/serializer.h"
#include "qb/status.h"
#include "qb/suggest/cost.h"
#include "qb/suggest/suggest.h"
#include "qb/varsql/rule.h"

namespace qb::cli {
namespace {

using nlohmann::json;

int CodeFor(const absl::Status& status) {
  return KindOf(status) == ErrorKind::kIo ? kIoError : kConfigError;
}

int Fail(std::ostream& err, const absl::Status& status) {
  err << "qb: " << status.message() << "\n";
  return CodeFor(status);
}

absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return MakeError(ErrorKind::kIo, "cannot read " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

absl::Status WriteFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return MakeError(ErrorKind::kIo, "cannot write " + path);
  out << text;
  return out ? absl::OkStatus()
             : MakeError(ErrorKind::kIo, "cannot write " + path);
}

struct RewriteFlags {
  std::string rules;
  int64_t workspace = service::kDefaultWorkspace;
  std::string server;
  std::string schema;
  std::string dialect = "generic";
  bool explain = false;
  std::string in;
  int max_steps = 64;
};

struct SuggestFlags {
  std::string examples;
  std::string strategy;
  std::string mdl;
  std::optional<double> beta;
  std::string workload;
  std::string out;
  std::string dialect = "generic";
  std::vector<std::string> compare;
  int64_t budget_ms = 0;
};

struct RulesFlags {
  std::string store;
  std::string text;
  std::string name;
  int priority = 0;
  int64_t workspace = service::kDefaultWorkspace;
  bool workspace_set = false;
  int64_t id = 0;
  std::string file;
  std::string dialect = "generic";
};

struct ServeFlags {
  std::string listen;
  std::string store;
};

// Rewrites each statement through the service.
absl::StatusOr<json> RemoteRewrite(httplib::Client& client,
                                   const std::string& statement,
                                   const RewriteFlags& flags) {
  json request = {{"sql", statement},
                  {"workspace", flags.workspace},
                  {"explain", flags.explain}};
  auto res = client.Post("/api/v1/rewrite", request.dump(),
                         "application/json");
  if (!res) {
    return MakeError(ErrorKind::kIo, "cannot reach " + flags.server);
  }
  json body = json::parse(res->body, nullptr, false);
  if (body.is_discarded() || res->status != 200) {
    return MakeError(ErrorKind::kInvalidArgument,
                     "server answered " + std::to_string(res->status) + ": " +
                         res->body);
  }
  return body;
}

int CmdRewrite(const RewriteFlags& flags, std::istream& in, std::ostream& out,
               std::ostream& err) {
  absl::StatusOr<sql::Dialect> dialect = sql::ParseDialect(flags.dialect);
  if (!dialect.ok()) return Fail(err, dialect.status());
  std::string input;
  if (!flags.in.empty()) {
    absl::StatusOr<std::string> text = ReadFile(flags.in);
    if (!text.ok()) return Fail(err, text.status());
    input = *text;
  } else {
    std::stringstream buffer;
    buffer << in.rdbuf();
    input = buffer.str();
  }
  std::vector<std::string> statements = sql::SplitStatements(input);

  if (!flags.server.empty()) {
    httplib::Client client(flags.server);
    for (const std::string& s : statements) {
      absl::StatusOr<json> body = RemoteRewrite(client, s, flags);
      if (!body.ok()) return Fail(err, body.status());
      out << (*body)["sql"].get<std::string>() << ";\n";
      if (flags.explain && body->contains("trace")) {
        err << (*body)["trace"].dump() << "\n";
      }
    }
    return kOk;
  }

  std::vector<varsql::Rule> rules;
  if (!flags.rules.empty()) {
    absl::StatusOr<std::vector<varsql::Rule>> loaded =
        varsql::LoadRuleFile(flags.rules, *dialect);
    if (!loaded.ok()) return Fail(err, loaded.status());
    rules = std::move(*loaded);
  }
  std::optional<sql::SchemaCatalog> schema;
  if (!flags.schema.empty()) {
    absl::StatusOr<sql::SchemaCatalog> loaded =
        sql::SchemaCatalog::FromFile(flags.schema);
    if (!loaded.ok()) return Fail(err, loaded.status());
    schema = std::move(*loaded);
  }
  rewrite::RewriteLimits limits;
  limits.max_steps = flags.max_steps;
  limits.apply.dialect = *dialect;
  for (const std::string& s : statements) {
    absl::StatusOr<sql::NodePtr> query = sql::ParseQuery(s, *dialect);
    if (!query.ok()) {
      // Unparseable statements pass through untouched.
      out << s << ";\n";
      if (flags.explain) {
        err << json({{"warning", std::string(query.status().message())}})
                   .dump()
            << "\n";
      }
      continue;
    }
    rewrite::RewriteResult result = rewrite::Rewrite(
        *query, rules, schema ? &*schema : nullptr, limits);
    if (result.trace.steps.empty()) {
      out << s << ";\n";
    } else {
      out << sql::Serialize(result.query, *dialect) << ";\n";
    }
    if (flags.explain) {
      err << rewrite::TraceToJson(result.trace, *dialect).dump() << "\n";
    }
  }
  return kOk;
}

int CmdSuggest(const SuggestFlags& flags, std::ostream& out,
               std::ostream& err) {
  absl::StatusOr<sql::Dialect> dialect = sql::ParseDialect(flags.dialect);
  if (!dialect.ok()) return Fail(err, dialect.status());
  absl::StatusOr<std::string> text = ReadFile(flags.examples);
  if (!text.ok()) return Fail(err, text.status());
  absl::StatusOr<std::vector<suggest::RewritePair>> pairs =
      suggest::ParseExamplesText(*text, *dialect);
  if (!pairs.ok()) return Fail(err, pairs.status());

  suggest::SuggestOptions options;
  if (!flags.mdl.empty()) {
    absl::StatusOr<suggest::MdlConfig> mdl = suggest::ParseMdlConfig(flags.mdl);
    if (!mdl.ok()) return Fail(err, mdl.status());
    options.mdl = *mdl;
  }
  if (flags.beta) {
    options.cost.beta = *flags.beta;
    options.cost.provider = suggest::StaticCostProvider(*dialect);
    options.cost.dialect = *dialect;
    if (!flags.workload.empty()) {
      absl::StatusOr<std::string> w = ReadFile(flags.workload);
      if (!w.ok()) return Fail(err, w.status());
      absl::StatusOr<std::vector<sql::NodePtr>> workload =
          suggest::ParseWorkload(*w, *dialect);
      if (!workload.ok()) return Fail(err, workload.status());
      options.cost.workload = std::move(*workload);
    } else {
      for (const auto& p : *pairs) options.cost.workload.push_back(p.original);
    }
  }
  if (flags.budget_ms > 0) {
    options.budget = std::chrono::milliseconds(flags.budget_ms);
  }

  if (!flags.compare.empty()) {
    // One CSV row per strategy.
    std::ostringstream csv;
    csv << "strategy,candidates_explored,iterations,rules,total_dl_before,"
           "total_dl_after,wall_time_ms\n";
    for (const std::string& name : flags.compare) {
      absl::StatusOr<suggest::ExplorerConfig> explorer =
          suggest::ParseStrategy(name);
      if (!explorer.ok()) return Fail(err, explorer.status());
      options.explorer = *explorer;
      absl::StatusOr<suggest::SuggestReport> report =
          suggest::SuggestRules(*pairs, options);
      if (!report.ok()) return Fail(err, report.status());
      const suggest::SuggestStats& s = report->stats;
      csv << suggest::StrategyName(*explorer) << ',' << s.candidates_explored
          << ',' << s.iterations << ',' << report->rules.size() << ','
          << suggest::ToString(s.total_dl_before) << ','
          << suggest::ToString(s.total_dl_after) << ',' << s.wall_time_ms
          << "\n";
    }
    if (flags.out.empty()) {
      out << csv.str();
      return kOk;
    }
    absl::Status written = WriteFile(flags.out, csv.str());
    return written.ok() ? kOk : Fail(err, written);
  }

  absl::StatusOr<suggest::ExplorerConfig> explorer =
      suggest::ParseStrategy(flags.strategy);
  if (!explorer.ok()) return Fail(err, explorer.status());
  options.explorer = *explorer;
  absl::StatusOr<suggest::SuggestReport> report =
      suggest::SuggestRules(*pairs, options);
  if (!report.ok()) return Fail(err, report.status());
  std::string body = suggest::ReportToJson(*report).dump(2) + "\n";
  if (flags.out.empty()) {
    out << body;
  } else {
    absl::Status written = WriteFile(flags.out, body);
    if (!written.ok()) return Fail(err, written);
    for (const auto& r : report->rules) {
      out << varsql::SerializeRule(r.rule) << "\n";
    }
  }
  return kOk;
}

int StoreCall(service::RuleStore* store, const std::string& method,
              const std::string& path, const json& body, std::ostream& out,
              std::ostream& err,
              const std::map<std::string, std::string>& query = {}) {
  service::Api api(store, service::ServiceConfig{});
  service::ApiResponse res =
      api.Handle(method, path, body.is_null() ? "" : body.dump(), query);
  if (res.status >= 400) {
    err << "qb: " << res.body.value("detail", std::string("error")) << "\n";
    return res.status == 404 || res.status == 409 || res.status == 400
               ? kConfigError
               : kIoError;
  }
  out << res.body.dump(2) << "\n";
  return kOk;
}

absl::StatusOr<std::string> StorePath(const std::string& flag,
                                      const std::string& config_path) {
  absl::StatusOr<service::ServiceConfig> config =
      service::LoadConfig(config_path);
  if (!config.ok()) return config.status();
  return flag.empty() ? config->store_path : flag;
}

int CmdServe(const ServeFlags& flags, const std::string& config_path,
             std::ostream& out, std::ostream& err) {
  absl::StatusOr<service::ServiceConfig> config =
      service::LoadConfig(config_path);
  if (!config.ok()) return Fail(err, config.status());
  if (!flags.listen.empty()) config->listen_addr = flags.listen;
  if (!flags.store.empty()) config->store_path = flags.store;
  std::string host;
  int port = 0;
  absl::Status addr = service::SplitListenAddr(config->listen_addr, &host,
                                               &port);
  if (!addr.ok()) return Fail(err, addr);
  absl::StatusOr<std::unique_ptr<service::RuleStore>> store =
      service::RuleStore::Open(config->store_path);
  if (!store.ok()) return Fail(err, store.status());
  service::Api api(store->get(), *config);
  service::Server server(&api);
  if (!config->ui_dir.empty()) {
    absl::Status mounted = server.MountUi(config->ui_dir);
    if (!mounted.ok()) return Fail(err, mounted);
  }
  absl::Status bound = server.Bind(host, port);
  if (!bound.ok()) return Fail(err, bound);
  out << "listening on " << host << ":" << server.port() << std::endl;
  absl::Status ran = server.Run();
  return ran.ok() ? kOk : Fail(err, ran);
}

}  // namespace

int Run(int argc, const char* const* argv, std::istream& in, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"qb: SQL query rewriting with VarSQL rules"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "Service config file (JSON)");

  RewriteFlags rw;
  CLI::App* rewrite_cmd =
      app.add_subcommand("rewrite", "Rewrite SQL statements with rules");
  auto* rules_opt = rewrite_cmd->add_option("--rules", rw.rules,
                                            "Rule file (JSON array)");
  auto* ws_opt = rewrite_cmd->add_option("--workspace", rw.workspace,
                                         "Workspace id on the server");
  auto* server_opt =
      rewrite_cmd->add_option("--server", rw.server, "Service base URL");
  rules_opt->excludes(server_opt);
  ws_opt->needs(server_opt);
  rewrite_cmd->add_option("--schema", rw.schema, "Schema file (JSON)");
  rewrite_cmd->add_option("--dialect", rw.dialect,
                          "generic, postgres or mysql");
  rewrite_cmd->add_flag("--explain", rw.explain,
                        "Print the rewrite trace as JSON on stderr");
  rewrite_cmd->add_option("--in", rw.in, "Input SQL file");
  rewrite_cmd->add_option("--max-steps", rw.max_steps, "Rewrite step limit")
      ->check(CLI::PositiveNumber);

  SuggestFlags sg;
  double beta = 1.0;
  CLI::App* suggest_cmd =
      app.add_subcommand("suggest", "Suggest rules from example pairs");
  suggest_cmd->add_option("--examples", sg.examples, "Examples file (JSON)")
      ->required();
  suggest_cmd->add_option("--strategy", sg.strategy, "bf, khn:K or mpn:M");
  suggest_cmd->add_option("--mdl", sg.mdl, "Description length W,We,Ws");
  auto* beta_opt = suggest_cmd->add_option("--beta", beta,
                                           "Weight of description length")
                       ->check(CLI::Range(0.0, 1.0));
  suggest_cmd->add_option("--workload", sg.workload,
                          "Workload queries for cost-aware suggestion");
  suggest_cmd->add_option("--out", sg.out, "Write the report here");
  suggest_cmd->add_option("--dialect", sg.dialect,
                          "generic, postgres or mysql");
  suggest_cmd->add_option("--compare", sg.compare,
                          "Run several strategies and print stats as CSV")
      ->delimiter(',');
  suggest_cmd->add_option("--budget-ms", sg.budget_ms, "Time budget");

  RulesFlags rl;
  CLI::App* rules_cmd = app.add_subcommand("rules", "Manage the rule store");
  rules_cmd->add_option("--store", rl.store, "Store file");
  rules_cmd->require_subcommand(1);
  CLI::App* add_cmd = rules_cmd->add_subcommand("add", "Add a rule");
  add_cmd->add_option("rule", rl.text, "Rule text")->required();
  add_cmd->add_option("--name", rl.name, "Rule name");
  add_cmd->add_option("--priority", rl.priority, "Priority (high first)");
  add_cmd->add_option("--workspace", rl.workspace, "Workspace id");
  add_cmd->add_option("--dialect", rl.dialect, "Dialect of the rule text");
  CLI::App* list_cmd = rules_cmd->add_subcommand("list", "List rules");
  auto* list_ws = list_cmd->add_option("--workspace", rl.workspace,
                                       "Only this workspace");
  CLI::App* delete_cmd = rules_cmd->add_subcommand("delete", "Delete a rule");
  delete_cmd->add_option("id", rl.id, "Rule id")->required();
  CLI::App* enable_cmd = rules_cmd->add_subcommand("enable", "Enable a rule");
  enable_cmd->add_option("id", rl.id, "Rule id")->required();
  CLI::App* disable_cmd =
      rules_cmd->add_subcommand("disable", "Disable a rule");
  disable_cmd->add_option("id", rl.id, "Rule id")->required();
  CLI::App* priority_cmd =
      rules_cmd->add_subcommand("priority", "Set a rule's priority");
  priority_cmd->add_option("id", rl.id, "Rule id")->required();
  priority_cmd->add_option("value", rl.priority, "New priority")->required();
  CLI::App* import_cmd =
      rules_cmd->add_subcommand("import", "Add every rule of a rule file");
  import_cmd->add_option("file", rl.file, "Rule file (JSON array)")
      ->required();
  import_cmd->add_option("--workspace", rl.workspace, "Target workspace");
  import_cmd->add_option("--dialect", rl.dialect, "Dialect of the rule file");
  CLI::App* export_cmd =
      rules_cmd->add_subcommand("export", "Print the rules as a rule file");

  ServeFlags sv;
  CLI::App* serve_cmd = app.add_subcommand("serve", "Run the HTTP service");
  serve_cmd->add_option("--listen", sv.listen, "host:port");
  serve_cmd->add_option("--store", sv.store, "Store file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << "qb: " << e.what() << "\n";
    return kUsage;
  }

  if (rewrite_cmd->parsed()) {
    if (rw.server.empty() && *ws_opt) {
      err << "qb: --workspace needs --server\n";
      return kUsage;
    }
    return CmdRewrite(rw, in, out, err);
  }
  if (suggest_cmd->parsed()) {
    if (*beta_opt) sg.beta = beta;
    return CmdSuggest(sg, out, err);
  }
  if (serve_cmd->parsed()) return CmdServe(sv, config_path, out, err);

  absl::StatusOr<std::string> path = StorePath(rl.store, config_path);
  if (!path.ok()) return Fail(err, path.status());
  absl::StatusOr<std::unique_ptr<service::RuleStore>> store =
      service::RuleStore::Open(*path);
  if (!store.ok()) return Fail(err, store.status());
  service::RuleStore* s = store->get();
  std::string rule_path = "/api/v1/rules/" + std::to_string(rl.id);
  if (add_cmd->parsed()) {
    absl::StatusOr<sql::Dialect> d = sql::ParseDialect(rl.dialect);
    if (!d.ok()) return Fail(err, d.status());
    absl::StatusOr<varsql::Rule> rule = varsql::ParseRule(rl.text, *d);
    if (!rule.ok()) return Fail(err, rule.status());
    json body = varsql::RuleToJson(*rule);
    body["id"] = 0;
    body["name"] = rl.name;
    body["priority"] = rl.priority;
    body["workspace"] = rl.workspace;
    return StoreCall(s, "POST", "/api/v1/rules", body, out, err);
  }
  if (list_cmd->parsed()) {
    std::map<std::string, std::string> query;
    if (*list_ws) query["workspace"] = std::to_string(rl.workspace);
    return StoreCall(s, "GET", "/api/v1/rules", nullptr, out, err, query);
  }
  if (delete_cmd->parsed()) {
    return StoreCall(s, "DELETE", rule_path, nullptr, out, err);
  }
  if (enable_cmd->parsed()) {
    return StoreCall(s, "POST", rule_path + "/enable", json::object(), out,
                     err);
  }
  if (disable_cmd->parsed()) {
    return StoreCall(s, "POST", rule_path + "/disable", json::object(), out,
                     err);
  }
  if (priority_cmd->parsed()) {
    return StoreCall(s, "PUT", rule_path, {{"priority", rl.priority}}, out,
                     err);
  }
  if (import_cmd->parsed()) {
    absl::StatusOr<sql::Dialect> d = sql::ParseDialect(rl.dialect);
    if (!d.ok()) return Fail(err, d.status());
    absl::StatusOr<std::vector<varsql::Rule>> rules =
        varsql::LoadRuleFile(rl.file, *d);
    if (!rules.ok()) return Fail(err, rules.status());
    int added = 0;
    for (varsql::Rule rule : *rules) {
      rule.id = 0;
      rule.workspace = rl.workspace;
      absl::StatusOr<varsql::Rule> created = s->CreateRule(rule);
      if (!created.ok()) return Fail(err, created.status());
      ++added;
    }
    out << "imported " << added << " rules\n";
    return kOk;
  }
  if (export_cmd->parsed()) {
    std::vector<varsql::Rule> rules;
    for (const auto& [id, rule] : s->Snapshot()->rules) rules.push_back(rule);
    out << varsql::RulesToJsonText(rules);
    return kOk;
  }
  err << "qb: no command\n";
  return kUsage;
}

}  // namespace qb::cli
