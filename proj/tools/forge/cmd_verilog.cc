// Copyright 2026 The Forge Authors
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


#include <map>
#include <sstream>

#include "forge/mutation/mutation.h"
#include "forge/positive/transforms.h"
#include "forge/util/error.h"
#include "forge/util/io.h"
#include "forge/util/rng.h"
#include "forge/verilog/parser.h"
#include "forge/verilog/printer.h"
#include "forge/verilog/semantic.h"
#include "tools/forge/common.h"

namespace forge::cli {

namespace fs = std::filesystem;

namespace {

std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '\n') {
      out += "\\n";
    } else if (c == '\t') {
      out += "\\t";
    } else {
      out += c;
    }
  }
  return out;
}

std::string range_text(const std::optional<verilog::Range>& r) {
  if (!r) return "";
  return " [" + verilog::print_expr(r->msb) + ":" + verilog::print_expr(r->lsb) + "]";
}

std::string decl_text(const verilog::Declaration& d) {
  std::ostringstream os;
  os << "decl";
  if (d.direction != verilog::Direction::kNone) os << ' ' << verilog::direction_name(d.direction);
  if (d.type != verilog::NetType::kImplicit) os << ' ' << verilog::net_type_name(d.type);
  if (d.is_signed) os << " signed";
  os << range_text(d.range);
  for (size_t i = 0; i < d.names.size(); ++i) {
    os << (i ? ", " : " ") << d.names[i].name << range_text(d.names[i].array);
    if (d.names[i].init) os << " = " << verilog::print_expr(*d.names[i].init);
  }
  return os.str();
}

void dump_stmt(std::ostringstream& os, const verilog::Stmt& s, int depth) {
  const std::string pad(2 * depth, ' ');
  using K = verilog::StmtKind;
  switch (s.kind) {
    case K::kBlock:
      os << pad << "block" << (s.keyword.empty() ? "" : " " + s.keyword) << "\n";
      for (const auto& b : s.body) dump_stmt(os, b, depth + 1);
      break;
    case K::kIf:
      os << pad << "if " << verilog::print_expr(s.rhs) << "\n";
      dump_stmt(os, s.body[0], depth + 1);
      if (s.has_else()) {
        os << pad << "else\n";
        dump_stmt(os, s.body[1], depth + 1);
      }
      break;
    case K::kCase:
      os << pad << s.keyword << ' ' << verilog::print_expr(s.rhs) << "\n";
      for (const auto& item : s.items) {
        os << pad << "  item ";
        if (item.is_default) {
          os << "default";
        } else {
          for (size_t i = 0; i < item.labels.size(); ++i) {
            os << (i ? ", " : "") << verilog::print_expr(item.labels[i]);
          }
        }
        os << "\n";
        dump_stmt(os, item.body, depth + 2);
      }
      break;
    case K::kBlockingAssign:
    case K::kNonblockingAssign:
      os << pad << (s.kind == K::kBlockingAssign ? "blocking " : "nonblocking ")
         << verilog::print_expr(s.lhs) << (s.kind == K::kBlockingAssign ? " = " : " <= ")
         << verilog::print_expr(s.rhs) << "\n";
      break;
    case K::kNull:
      os << pad << "null\n";
      break;
  }
}

std::string dump_ast(const verilog::SourceUnit& unit) {
  std::ostringstream os;
  for (const auto& m : unit.modules) {
    os << "module " << m.name << (m.ansi ? " (ansi)" : "") << "\n";
    for (const auto& p : m.header_params) {
      for (const auto& a : p.params) {
        os << "  parameter " << a.name << " = " << verilog::print_expr(a.value) << "\n";
      }
    }
    for (const auto& d : m.ansi_ports) os << "  " << decl_text(d) << "\n";
    for (const auto& item : m.items) {
      if (const auto* d = std::get_if<verilog::Declaration>(&item)) {
        os << "  " << decl_text(*d) << "\n";
      } else if (const auto* p = std::get_if<verilog::ParamDecl>(&item)) {
        for (const auto& a : p->params) {
          os << "  " << (p->local ? "localparam " : "parameter ") << a.name << " = "
             << verilog::print_expr(a.value) << "\n";
        }
      } else if (const auto* c = std::get_if<verilog::ContinuousAssign>(&item)) {
        for (const auto& a : c->assigns) {
          os << "  assign " << verilog::print_expr(a.lhs) << " = " << verilog::print_expr(a.rhs)
             << "\n";
        }
      } else if (const auto* al = std::get_if<verilog::Always>(&item)) {
        os << "  always @(";
        if (al->star) {
          os << "*";
        } else {
          for (size_t i = 0; i < al->sensitivity.size(); ++i) {
            const auto& s = al->sensitivity[i];
            os << (i ? " or " : "")
               << (s.edge == verilog::Edge::kPosedge   ? "posedge "
                   : s.edge == verilog::Edge::kNegedge ? "negedge "
                                                       : "")
               << verilog::print_expr(s.signal);
          }
        }
        os << ")\n";
        dump_stmt(os, al->body, 2);
      }
    }
  }
  return os.str();
}

verilog::SourceUnit parse_anchor(const fs::path& path) {
  verilog::SourceUnit unit = verilog::parse(read_file(path));
  if (unit.has_errors()) {
    throw Error(ErrorCode::kAnchorInvalid, path.string() + " has parse errors");
  }
  return unit;
}

void add_parse(CLI::App& app, Globals& g) {
  auto* cmd = app.add_subcommand("parse", "Parse a Verilog file and report diagnostics");
  struct Opts {
    std::string file;
    bool tokens = false;
    bool ast = false;
  };
  auto o = std::make_shared<Opts>();
  cmd->add_option("file", o->file, "Verilog source")->required()->check(CLI::ExistingFile);
  cmd->add_flag("--dump-tokens", o->tokens, "List non-trivia tokens");
  cmd->add_flag("--dump-ast", o->ast, "Print the syntax tree");
  cmd->callback([o, &g] {
    const verilog::FrontendCheck check = verilog::check_source(read_file(o->file));
    const std::string& src = check.unit.source;
    ordered_json j;
    j["file"] = o->file;
    j["diagnostics"] = ordered_json::array();
    std::ostringstream text;
    size_t errors = 0, warnings = 0;
    auto report = [&](const verilog::ParseDiagnostic& d) {
      const auto [line, col] = line_col(src, d.span.begin);
      const bool err = d.severity == verilog::Severity::kError;
      (err ? errors : warnings)++;
      text << o->file << ":" << line << ":" << col << ": " << (err ? "error" : "warning") << ": "
           << d.message << "\n";
      j["diagnostics"].push_back({{"severity", err ? "error" : "warning"},
                                  {"line", line},
                                  {"column", col},
                                  {"message", d.message}});
    };
    for (const auto& d : check.unit.diagnostics) report(d);
    for (const auto& d : check.declaration_diagnostics) report(d);
    j["errors"] = errors;
    j["warnings"] = warnings;
    j["modules"] = ordered_json::array();
    for (const auto& m : check.unit.modules) j["modules"].push_back(m.name);
    if (o->tokens) {
      j["tokens"] = ordered_json::array();
      text << "tokens:\n";
      for (const auto& t : check.unit.tokens) {
        if (t.is_trivia()) continue;
        const auto [line, col] = line_col(src, t.span.begin);
        text << "  " << line << ":" << col << " " << verilog::token_kind_name(t.kind) << " '"
             << escape(t.text) << "'\n";
        j["tokens"].push_back({{"line", line},
                               {"column", col},
                               {"kind", verilog::token_kind_name(t.kind)},
                               {"text", t.text}});
      }
    }
    if (o->ast) {
      const std::string ast = dump_ast(check.unit);
      j["ast"] = ast;
      text << "ast:\n" << ast;
    }
    text << errors << " error(s), " << warnings << " warning(s)\n";
    emit(g, j, text.str());
    g.exit_code = errors == 0 ? kExitOk : kExitStage;
  });
}

void write_mutant(const fs::path& dir, const std::string& stem, const mutation::Mutant& m, int k,
                  ordered_json& listing) {
  const std::string base = stem + "__" + m.record.rule_id + "__" + std::to_string(k);
  write_file(dir / (base + ".v"), m.source);
  ordered_json meta;
  meta["rule_id"] = m.record.rule_id;
  meta["site_begin"] = m.record.site.begin;
  meta["site_end"] = m.record.site.end;
  meta["original_text"] = m.record.original_text;
  meta["mutated_text"] = m.record.mutated_text;
  meta["seed"] = m.record.seed;
  write_file(dir / (base + ".json"), meta.dump(2) + "\n");
  meta["file"] = (dir / (base + ".v")).string();
  listing.push_back(meta);
}

void add_mutate(CLI::App& app, Globals& g) {
  auto* cmd = app.add_subcommand("mutate", "Generate single-edit erroneous variants of an anchor");
  struct Opts {
    std::string anchor;
    std::string rule = "all";
    uint64_t seed = 0;
    size_t max = 10;
    std::string out;
    bool list = false;
  };
  auto o = std::make_shared<Opts>();
  cmd->add_option("anchor", o->anchor, "Anchor design")->check(CLI::ExistingFile);
  cmd->add_option("--rule", o->rule, "Rule id, family name or 'all'");
  cmd->add_option("--seed", o->seed, "Seed");
  cmd->add_option("--max", o->max, "Variants per rule or family");
  cmd->add_option("--out", o->out, "Output directory");
  cmd->add_flag("--list-rules", o->list, "List the rules and exit");
  cmd->callback([o, &g] {
    if (o->list) {
      ordered_json j = ordered_json::array();
      std::ostringstream text;
      for (const auto& r : mutation::list_rules()) {
        j.push_back({{"id", r.id},
                     {"family", mutation::family_name(r.family)},
                     {"description", r.description}});
        text << r.id << "  " << mutation::family_name(r.family) << "  " << r.description << "\n";
      }
      emit(g, j, text.str());
      return;
    }
    if (o->anchor.empty() || o->out.empty()) usage("mutate needs an anchor and --out");
    const auto unit = parse_anchor(o->anchor);
    std::vector<std::vector<mutation::Mutant>> batches;
    if (o->rule == "all") {
      for (auto f : {mutation::Family::kPunctuation, mutation::Family::kKeyword,
                     mutation::Family::kOperator, mutation::Family::kDeclaration,
                     mutation::Family::kStructural}) {
        batches.push_back(mutation::mutate_family(unit, f, derive_seed(o->seed, static_cast<int>(f)), o->max));
      }
    } else if (auto f = mutation::parse_family(o->rule)) {
      batches.push_back(mutation::mutate_family(unit, *f, o->seed, o->max));
    } else {
      batches.push_back(mutation::mutate(unit, mutation::find_rule(o->rule), o->seed, o->max));
    }
    const std::string stem = fs::path(o->anchor).stem().string();
    ordered_json listing = ordered_json::array();
    std::map<std::string, int> per_rule;
    for (const auto& batch : batches) {
      for (const auto& m : batch) write_mutant(o->out, stem, m, per_rule[m.record.rule_id]++, listing);
    }
    std::ostringstream text;
    for (const auto& m : listing) {
      text << m["file"].get<std::string>() << "  " << m["rule_id"].get<std::string>() << "  '"
           << escape(m["original_text"].get<std::string>()) << "' -> '"
           << escape(m["mutated_text"].get<std::string>()) << "'\n";
    }
    text << listing.size() << " mutant(s) written to " << o->out << "\n";
    emit(g, listing, text.str());
  });
}

void add_positives(CLI::App& app, Globals& g) {
  auto* cmd = app.add_subcommand("positives", "Generate semantics-preserving rewrites of an anchor");
  struct Opts {
    std::string anchor;
    std::string transforms = "all";
    uint64_t seed = 0;
    size_t count = 3;
    std::string out;
  };
  auto o = std::make_shared<Opts>();
  cmd->add_option("anchor", o->anchor, "Anchor design")->required()->check(CLI::ExistingFile);
  cmd->add_option("--transforms", o->transforms, "'all' or a comma list of transform names");
  cmd->add_option("--seed", o->seed, "Seed");
  cmd->add_option("--count", o->count, "Number of positives");
  cmd->add_option("--out", o->out, "Output directory")->required();
  cmd->callback([o, &g] {
    std::vector<positive::TransformId> allowed;
    if (o->transforms == "all") {
      allowed = positive::all_transforms();
    } else {
      for (const std::string& name : split_list(o->transforms)) {
        const auto id = positive::parse_transform(name);
        if (!id) usage("unknown transform '" + name + "'");
        allowed.push_back(*id);
      }
    }
    const auto unit = parse_anchor(o->anchor);
    const auto positives = positive::generate_positives(unit, o->count, o->seed, allowed);
    const std::string stem = fs::path(o->anchor).stem().string();
    ordered_json listing = ordered_json::array();
    std::map<std::string, int> per_transform;
    std::ostringstream text;
    for (const auto& p : positives) {
      const std::string name(positive::transform_name(p.record.transform_id));
      const std::string base = stem + "__" + name + "__" + std::to_string(per_transform[name]++);
      write_file(fs::path(o->out) / (base + ".v"), p.source);
      ordered_json meta;
      meta["transform"] = name;
      meta["details"] = p.record.details;
      meta["seed"] = p.record.seed;
      meta["renaming"] = ordered_json::object();
      for (const auto& [from, to] : p.record.renaming) meta["renaming"][from] = to;
      write_file(fs::path(o->out) / (base + ".json"), meta.dump(2) + "\n");
      meta["file"] = (fs::path(o->out) / (base + ".v")).string();
      text << meta["file"].get<std::string>() << "  " << name << "  " << p.record.details << "\n";
      listing.push_back(meta);
    }
    text << listing.size() << " positive(s) written to " << o->out << "\n";
    emit(g, listing, text.str());
  });
}

void add_validate(CLI::App& app) {
  auto* cmd = app.add_subcommand("validate", "Classify a candidate with the compile/simulate/equivalence oracles");
  struct Opts {
    std::string candidate;
    std::string anchor;
    std::string mode = "compile";
    std::string config;
    uint64_t seed = 0;
    std::string log_dir;
  };
  auto o = std::make_shared<Opts>();
  cmd->add_option("candidate", o->candidate, "Candidate design")->required()->check(CLI::ExistingFile);
  cmd->add_option("--anchor", o->anchor, "Reference design")->check(CLI::ExistingFile);
  cmd->add_option("--mode", o->mode, "compile, func or equiv")
      ->check(CLI::IsMember({"compile", "func", "equiv"}));
  cmd->add_option("--config", o->config, "tools.toml (default: $FORGE_TOOLS)");
  cmd->add_option("--seed", o->seed, "Stimulus seed for func mode");
  cmd->add_option("--log-dir", o->log_dir, "Write the tool log here");
  cmd->callback([o] {
    if (o->mode != "compile" && o->anchor.empty()) usage(o->mode + " mode needs --anchor");
    const validation::Harness harness(load_tools(o->config));
    const std::string cand = read_file(o->candidate);
    validation::Verdict v;
    if (o->mode == "compile") {
      v = harness.check_compile(cand);
    } else if (o->mode == "func") {
      v = harness.check_functional(cand, read_file(o->anchor), o->seed);
    } else {
      v = harness.check_equivalent(cand, read_file(o->anchor));
    }
    std::string log_path;
    if (!o->log_dir.empty()) {
      log_path = (fs::path(o->log_dir) /
                  (fs::path(o->candidate).stem().string() + "." + o->mode + ".log"))
                     .string();
      write_file(log_path, v.tool_log);
    }
    const std::string line = validation::verdict_json_line(o->candidate, o->mode, v, log_path);
    std::cout << line << (line.empty() || line.back() != '\n' ? "\n" : "");
  });
}

}  // namespace

void add_verilog_commands(CLI::App& app, Globals& g) {
  add_parse(app, g);
  add_mutate(app, g);
  add_positives(app, g);
  add_validate(app);
}

}  // namespace forge::cli
