// Copyright 2026 The CID Engine Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end. Everything flows through the C API; this file only
// parses arguments, moves file contents around, and renders human summaries
// from the JSON reports.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cid.h"

namespace {

using nlohmann::json;

// Owns strings returned by the C API.
struct ApiString {
  char* ptr = nullptr;
  ~ApiString() { cid_string_free(ptr); }
  std::string str() const { return ptr == nullptr ? "" : ptr; }
};

struct ModelHandle {
  cid_model* ptr = nullptr;
  ~ModelHandle() { cid_model_free(ptr); }
};

int ExitCodeOf(cid_status status) {
  switch (status) {
    case CID_OK:
      return 0;
    case CID_USAGE_ERROR:
      return 2;
    case CID_RESOURCE_LIMIT:
      return 3;
    default:
      return 1;
  }
}

int Complain(cid_status status) {
  std::cerr << "error: " << cid_last_error() << "\n";
  return ExitCodeOf(status);
}

bool ReadFile(const std::string& path, std::string* out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream buf;
  buf << in.rdbuf();
  *out = buf.str();
  return true;
}

bool WriteFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  out << text;
  return static_cast<bool>(out);
}

bool JsonPath(const std::string& path) {
  return path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
}

// Loads a model file, dispatching on extension. Returns 0 or an exit code.
int LoadModel(const std::string& path, bool lax, ModelHandle* out) {
  std::string text;
  if (!ReadFile(path, &text)) {
    std::cerr << "error: cannot read '" << path << "'\n";
    return 2;
  }
  cid_status status;
  if (JsonPath(path)) {
    status = lax ? cid_model_from_json_lax(text.c_str(), &out->ptr)
                 : cid_model_from_json(text.c_str(), &out->ptr);
  } else {
    status = lax ? cid_model_parse_lax(text.c_str(), &out->ptr)
                 : cid_model_parse(text.c_str(), &out->ptr);
  }
  if (status != CID_OK) {
    std::cerr << "error: " << path << ": " << cid_last_error() << "\n";
    return ExitCodeOf(status);
  }
  return 0;
}

void PrintReport(const std::string& report) { std::cout << report << "\n"; }

std::string JoinNames(const json& names) {
  std::string out;
  for (const auto& n : names) {
    if (!out.empty()) out += ", ";
    out += n.get<std::string>();
  }
  return out;
}

std::string Arrows(const json& path) {
  std::string out;
  for (const auto& n : path) {
    if (!out.empty()) out += " -> ";
    out += n.get<std::string>();
  }
  return out;
}

std::string RowLabel(const json& row) {
  std::string out = "(";
  out += JoinNames(row.at("when"));
  out += ")";
  return out;
}

std::string RowAction(const json& row) {
  const json& act = row.at("do");
  if (act.is_string()) return act.get<std::string>();
  std::string out = "{";
  bool first = true;
  for (auto it = act.at("dist").begin(); it != act.at("dist").end(); ++it) {
    if (!first) out += ", ";
    first = false;
    out += it.key() + ": " + it.value().dump();
  }
  return out + "}";
}

void PrintPolicy(const json& policy) {
  for (auto it = policy.begin(); it != policy.end(); ++it) {
    for (const auto& row : it.value()) {
      std::cout << "  " << it.key() << RowLabel(row) << " = " << RowAction(row)
                << "\n";
    }
  }
}

void PrintValues(const json& value) {
  std::cout << "expected utility:";
  for (auto it = value.begin(); it != value.end(); ++it) {
    std::cout << " " << it.key() << "=" << it.value().dump();
  }
  std::cout << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"causal influence diagram engine"};
  app.require_subcommand(1);
  // Global flags remain usable after the subcommand name.
  app.fallthrough();

  bool json_out = false;
  std::uint64_t max_factor = 0;
  std::uint64_t max_policies = 0;
  app.add_flag("--json", json_out, "print the module's JSON report");
  app.add_option("--max-factor", max_factor,
                 "cap on factor table entries (overrides CID_MAX_FACTOR)");
  app.add_option("--max-policies", max_policies,
                 "cap on enumerated pure policies (overrides CID_MAX_POLICIES)");

  std::string file, agent, method = "auto", policy_path, out_path;
  std::string from, to, decision, obs, do_list, zoo_name;
  std::vector<std::string> x_names, y_names, given_names, via_names, zoo_params;
  int horizon = 0;
  bool color_agents = false;

  CLI::App* validate = app.add_subcommand("validate", "check a model file");
  validate->add_option("file", file)->required();

  CLI::App* solve = app.add_subcommand("solve", "optimal policy for one agent");
  solve->add_option("file", file)->required();
  solve->add_option("--agent", agent)->required();
  solve->add_option("--method", method)
      ->check(CLI::IsMember({"auto", "exhaustive", "backward"}));

  CLI::App* eu = app.add_subcommand("eu", "expected utility under a policy");
  eu->add_option("file", file)->required();
  eu->add_option("--policy", policy_path)->required();
  eu->add_option("--agent", agent)->required();

  CLI::App* dsep = app.add_subcommand("dsep", "d-separation query");
  dsep->add_option("file", file)->required();
  dsep->add_option("--x", x_names)->required()->delimiter(',');
  dsep->add_option("--y", y_names)->required()->delimiter(',');
  dsep->add_option("--given", given_names)->delimiter(',');

  CLI::App* mediates = app.add_subcommand("mediates", "directed-path mediation");
  mediates->add_option("file", file)->required();
  mediates->add_option("--from", from)->required();
  mediates->add_option("--to", to)->required();
  mediates->add_option("--via", via_names)->required()->delimiter(',');

  CLI::App* incentives =
      app.add_subcommand("incentives", "self-fulfilling-prophecy diagnostic");
  incentives->add_option("file", file)->required();
  incentives->add_option("--decision", decision)->required();

  CLI::App* voi = app.add_subcommand("voi", "value of an information link");
  voi->add_option("file", file)->required();
  voi->add_option("--decision", decision)->required();
  voi->add_option("--obs", obs)->required();
  voi->add_option("--agent", agent)->required();

  CLI::App* twin = app.add_subcommand("twin", "twin network construction");
  twin->add_option("file", file)->required();
  twin->add_option("--do", do_list, "forced outcomes, e.g. Answer_cf=hidden");
  twin->add_option("-o,--out", out_path)->required();

  CLI::App* dot = app.add_subcommand("dot", "DOT graph export");
  dot->add_option("file", file)->required();
  dot->add_option("-o,--out", out_path)->required();
  dot->add_flag("--color-agents", color_agents);

  CLI::App* nash = app.add_subcommand("nash", "pure Nash equilibria");
  nash->add_option("file", file)->required();

  CLI::App* zoo = app.add_subcommand("zoo", "model catalog");
  zoo->require_subcommand(1);
  CLI::App* zoo_list = zoo->add_subcommand("list", "catalog entries");
  CLI::App* zoo_build = zoo->add_subcommand("build", "write a catalog model");
  zoo_build->add_option("name", zoo_name)->required();
  zoo_build->add_option("--horizon", horizon)->check(CLI::PositiveNumber);
  zoo_build->add_option("--param", zoo_params, "builder parameter key=value");
  zoo_build->add_option("-o,--out", out_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (const char* env = std::getenv("CID_MAX_FACTOR")) {
    if (std::uint64_t n = std::strtoull(env, nullptr, 10)) {
      cid_set_max_factor_entries(n);
    }
  }
  if (const char* env = std::getenv("CID_MAX_POLICIES")) {
    if (std::uint64_t n = std::strtoull(env, nullptr, 10)) {
      cid_set_max_policies(n);
    }
  }
  if (max_factor > 0) cid_set_max_factor_entries(max_factor);
  if (max_policies > 0) cid_set_max_policies(max_policies);

  auto joined = [](const std::vector<std::string>& items) {
    std::string out;
    for (const std::string& item : items) {
      if (!out.empty()) out += ",";
      out += item;
    }
    return out;
  };

  if (validate->parsed()) {
    ModelHandle model;
    if (int code = LoadModel(file, /*lax=*/true, &model)) return code;
    int ok = 0;
    ApiString report;
    if (cid_status s = cid_model_validate(model.ptr, &ok, &report.ptr)) {
      return Complain(s);
    }
    if (json_out) {
      PrintReport(report.str());
    } else {
      json doc = json::parse(report.str());
      std::cout << (ok ? "model is valid" : "model is invalid") << "\n";
      for (const auto& v : doc.at("violations")) {
        std::cout << "violation: " << v.at("subject").get<std::string>() << ": "
                  << v.at("message").get<std::string>() << "\n";
      }
      for (const auto& w : doc.at("warnings")) {
        std::cout << "warning: " << w.at("subject").get<std::string>() << ": "
                  << w.at("message").get<std::string>() << "\n";
      }
    }
    return ok ? 0 : 1;
  }

  if (solve->parsed()) {
    ModelHandle model;
    if (int code = LoadModel(file, false, &model)) return code;
    ApiString report;
    if (cid_status s =
            cid_solve(model.ptr, agent.c_str(), method.c_str(), &report.ptr)) {
      return Complain(s);
    }
    if (json_out) {
      PrintReport(report.str());
    } else {
      json doc = json::parse(report.str());
      std::cout << "solved '" << agent << "' by "
                << doc.at("method").get<std::string>() << " search ("
                << doc.at("explored").get<std::int64_t>() << " explored)\n";
      PrintValues(doc.at("value"));
      PrintPolicy(doc.at("policy"));
    }
    return 0;
  }

  if (eu->parsed()) {
    ModelHandle model;
    if (int code = LoadModel(file, false, &model)) return code;
    std::string policy_text;
    if (!ReadFile(policy_path, &policy_text)) {
      std::cerr << "error: cannot read '" << policy_path << "'\n";
      return 2;
    }
    ApiString report;
    if (cid_status s = cid_expected_utility(model.ptr, policy_text.c_str(),
                                            agent.c_str(), &report.ptr)) {
      return Complain(s);
    }
    if (json_out) {
      PrintReport(report.str());
    } else {
      json doc = json::parse(report.str());
      std::cout << "expected utility of '" << agent
                << "' = " << doc.at("value").dump() << "\n";
    }
    return 0;
  }

  if (dsep->parsed()) {
    ModelHandle model;
    if (int code = LoadModel(file, false, &model)) return code;
    ApiString report;
    if (cid_status s =
            cid_dsep(model.ptr, joined(x_names).c_str(),
                     joined(y_names).c_str(), joined(given_names).c_str(),
                     &report.ptr)) {
      return Complain(s);
    }
    if (json_out) {
      PrintReport(report.str());
    } else {
      json doc = json::parse(report.str());
      if (doc.at("separated").get<bool>()) {
        std::cout << "d-separated\n";
      } else {
        std::cout << "d-connected: " << Arrows(doc.at("witness")) << "\n";
      }
    }
    return 0;
  }

  if (mediates->parsed()) {
    ModelHandle model;
    if (int code = LoadModel(file, false, &model)) return code;
    ApiString report;
    if (cid_status s = cid_mediates(model.ptr, from.c_str(), to.c_str(),
                                    joined(via_names).c_str(), &report.ptr)) {
      return Complain(s);
    }
    if (json_out) {
      PrintReport(report.str());
    } else {
      json doc = json::parse(report.str());
      if (doc.at("mediates").get<bool>()) {
        std::cout << "every directed path from '" << from << "' to '" << to
                  << "' passes through {" << JoinNames(doc.at("via")) << "}\n";
      } else {
        std::cout << "some directed path from '" << from << "' to '" << to
                  << "' avoids {" << JoinNames(doc.at("via")) << "}\n";
      }
    }
    return 0;
  }

  if (incentives->parsed()) {
    ModelHandle model;
    if (int code = LoadModel(file, false, &model)) return code;
    ApiString report;
    if (cid_status s =
            cid_incentives(model.ptr, decision.c_str(), &report.ptr)) {
      return Complain(s);
    }
    if (json_out) {
      PrintReport(report.str());
    } else {
      json doc = json::parse(report.str());
      const json& flagged = doc.at("flagged");
      if (flagged.empty()) {
        std::cout << "no world-state node is both influenceable and "
                     "reward-relevant for '"
                  << decision << "'\n";
      }
      for (const auto& flag : flagged) {
        std::cout << flag.at("subject").get<std::string>()
                  << ": ability " << Arrows(flag.at("ability").at("witness"))
                  << "; control " << Arrows(flag.at("control").at("witness"))
                  << "\n";
      }
    }
    return 0;
  }

  if (voi->parsed()) {
    ModelHandle model;
    if (int code = LoadModel(file, false, &model)) return code;
    ApiString report;
    if (cid_status s =
            cid_value_of_information(model.ptr, agent.c_str(),
                                     decision.c_str(), obs.c_str(),
                                     &report.ptr)) {
      return Complain(s);
    }
    if (json_out) {
      PrintReport(report.str());
    } else {
      json doc = json::parse(report.str());
      std::cout << "value of observing '" << obs << "' at '" << decision
                << "' = " << doc.at("value").dump() << "\n";
    }
    return 0;
  }

  if (twin->parsed()) {
    ModelHandle model;
    if (int code = LoadModel(file, false, &model)) return code;
    ModelHandle out;
    if (cid_status s = cid_twin(model.ptr, do_list.c_str(), &out.ptr)) {
      return Complain(s);
    }
    ApiString text;
    cid_status s = JsonPath(out_path) ? cid_model_to_json(out.ptr, &text.ptr)
                                      : cid_model_serialize(out.ptr, &text.ptr);
    if (s != CID_OK) return Complain(s);
    std::string payload = text.str();
    if (JsonPath(out_path)) payload += "\n";
    if (!WriteFile(out_path, payload)) {
      std::cerr << "error: cannot write '" << out_path << "'\n";
      return 2;
    }
    if (json_out) {
      ApiString doc;
      if (cid_status s2 = cid_model_to_json(out.ptr, &doc.ptr)) {
        return Complain(s2);
      }
      PrintReport(doc.str());
    } else {
      std::cout << "wrote twin network to " << out_path << "\n";
    }
    return 0;
  }

  if (dot->parsed()) {
    ModelHandle model;
    if (int code = LoadModel(file, false, &model)) return code;
    ApiString text;
    if (cid_status s =
            cid_model_dot(model.ptr, color_agents ? 1 : 0, &text.ptr)) {
      return Complain(s);
    }
    if (!WriteFile(out_path, text.str())) {
      std::cerr << "error: cannot write '" << out_path << "'\n";
      return 2;
    }
    std::cout << "wrote DOT to " << out_path << "\n";
    return 0;
  }

  if (nash->parsed()) {
    ModelHandle model;
    if (int code = LoadModel(file, false, &model)) return code;
    ApiString report;
    if (cid_status s = cid_pure_nash(model.ptr, &report.ptr)) {
      return Complain(s);
    }
    if (json_out) {
      PrintReport(report.str());
    } else {
      json doc = json::parse(report.str());
      std::cout << doc.at("count").get<std::int64_t>()
                << " pure equilibria\n";
      for (const auto& eq : doc.at("equilibria")) {
        PrintValues(eq.at("value"));
        PrintPolicy(eq.at("policy"));
      }
    }
    return 0;
  }

  if (zoo_list->parsed()) {
    ApiString report;
    if (cid_status s = cid_zoo_list(&report.ptr)) return Complain(s);
    if (json_out) {
      PrintReport(report.str());
    } else {
      json doc = json::parse(report.str());
      for (const auto& entry : doc) {
        std::cout << entry.at("name").get<std::string>();
        const json& params = entry.at("params");
        if (!params.empty()) {
          std::cout << " (";
          bool first = true;
          for (auto it = params.begin(); it != params.end(); ++it) {
            if (!first) std::cout << ", ";
            first = false;
            std::cout << it.key() << "=" << it.value().get<std::string>();
          }
          std::cout << ")";
        }
        std::cout << ": " << entry.at("title").get<std::string>() << "\n";
      }
    }
    return 0;
  }

  if (zoo_build->parsed()) {
    std::vector<std::string> params = zoo_params;
    if (horizon > 0) params.push_back("horizon=" + std::to_string(horizon));
    ModelHandle model;
    if (cid_status s = cid_zoo_build(zoo_name.c_str(), joined(params).c_str(),
                                     &model.ptr)) {
      return Complain(s);
    }
    ApiString text;
    cid_status s = JsonPath(out_path)
                       ? cid_model_to_json(model.ptr, &text.ptr)
                       : cid_model_serialize(model.ptr, &text.ptr);
    if (s != CID_OK) return Complain(s);
    std::string payload = text.str();
    if (JsonPath(out_path)) payload += "\n";
    if (!WriteFile(out_path, payload)) {
      std::cerr << "error: cannot write '" << out_path << "'\n";
      return 2;
    }
    if (json_out) {
      ApiString doc;
      if (cid_status s2 = cid_model_to_json(model.ptr, &doc.ptr)) {
        return Complain(s2);
      }
      PrintReport(doc.str());
    } else {
      std::cout << "wrote " << zoo_name << " to " << out_path << "\n";
    }
    return 0;
  }

  return 2;
}
