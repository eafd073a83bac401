#include <CLI11.hpp>

#include <chrono>
#include <iostream>
#include <optional>
#include <string>

#include "d2lab/report.hpp"

using namespace d2lab;

namespace {

struct Common {
  std::string format = "text";
  std::optional<std::size_t> max_order;
  bool timing = false;
  [[nodiscard]] std::size_t cap() const { return max_order ? *max_order : default_order_cap(); }
};

struct GroupSource {
  std::string builder;
  std::string file;
};

GroupPtr load_group(const GroupSource& src, std::size_t cap, json& input, json* file_json = nullptr) {
  if (!src.file.empty()) {
    const auto j = read_json_file(src.file);
    if (file_json != nullptr) *file_json = j;
    auto g = group_from_json(j, cap);
    input["group"] = {{"file", src.file}, {"degree", g->degree()}, {"order", g->order()}};
    return g;
  }
  if (src.builder.empty()) throw ParseError("give --builder or --file");
  auto g = group_from_name(src.builder, cap);
  input["group"] = group_json(*g, src.builder);
  return g;
}

int emit(const Common& opt, json report, double seconds) {
  if (opt.timing) report["timing_seconds"] = seconds;
  const bool ok = report_ok(report);
  if (opt.format == "json") {
    std::cout << report.dump(2) << "\n";
  } else {
    std::cout << render_text(report);
  }
  return ok ? 0 : 1;
}

template <ExactField F>
json run_algebra(const std::string& builder, std::size_t n, const std::string& file, const std::string& sub,
                 const std::vector<std::string>& checks, unsigned seed, std::size_t cap, json& input) {
  AlgebraPtr<F> alg;
  std::vector<Vec<F>> b;
  if (!file.empty()) {
    const auto j = read_json_file(file);
    alg = algebra_from_json<F>(j);
    input["algebra"] = {{"file", file}, {"dim", alg->dim()}};
    if (sub.empty()) {
      if (!j.contains("subalgebra")) throw ParseError("algebra file has no subalgebra; give --sub");
      b = subalgebra_from_json<F>(j.at("subalgebra"), alg->dim());
    }
  } else {
    bool group_builder = false;
    try {
      auto g = group_from_name(builder, cap);
      alg = group_algebra<F>(*g);
      group_builder = true;
      input["algebra"] = {{"builder", "group"}, {"group", group_json(*g, builder)}, {"dim", alg->dim()}};
      if (sub.rfind("subgroup:", 0) == 0) b = subgroup_subalgebra<F>(subgroup_from_text(g, sub.substr(9)));
    } catch (const ParseError&) {
      if (group_builder) throw;
    }
    if (!group_builder) {
      alg = algebra_from_name<F>(builder, n);
      input["algebra"] = {{"builder", builder}, {"dim", alg->dim()}};
    }
  }
  if (b.empty()) {
    b = subalgebra_from_name(*alg, sub.empty() ? std::string("scalars") : sub);
  }
  input["subalgebra"] = !sub.empty() ? json(sub) : file.empty() ? json("scalars") : json("file");
  const ExtensionSpaces<F> sp(build_extension(alg, b));
  return algebra_checks_json(sp, checks, seed);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact workbench for depth-two, separable and Frobenius ring extensions"};
  app.require_subcommand(1);
  Common opt;
  app.add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--max-order", opt.max_order, "Group order cap (default: DEPTH2_MAX_ORDER or 5040)");
  app.add_flag("--timing", opt.timing, "Include wall-clock timing in the report");

  GroupSource gsrc;
  std::string subgroup;
  bool linear = false;
  auto* check_group = app.add_subcommand("check-group", "Depth-two verdict for a subgroup from character tables");
  check_group->add_option("--builder", gsrc.builder, "S{n}, A{n}, C{n}, D{n} or Q8");
  check_group->add_option("--file", gsrc.file, "Group JSON file");
  check_group->add_option("--subgroup", subgroup, "Subgroup generators in cycle notation, e.g. \"(01),(23)\"");
  check_group->add_flag("--linear", linear, "Cross-check with the structure-constant test over Q");

  bool exhaustive = false;
  auto* sweep = app.add_subcommand("sweep", "Normality versus depth two over all subgroups");
  sweep->add_option("--builder", gsrc.builder, "S{n}, A{n}, C{n}, D{n} or Q8");
  sweep->add_option("--file", gsrc.file, "Group JSON file");
  sweep->add_flag("--exhaustive", exhaustive, "Every subgroup rather than one per conjugacy class");
  sweep->add_flag("--linear", linear, "Cross-check with the structure-constant test over Q");

  std::string abuilder, afile, sub, field = "Q", checks_list;
  std::size_t n_param = 0;
  unsigned seed = 1;
  auto* check_algebra = app.add_subcommand("check-algebra", "Checks on an algebra extension");
  check_algebra->add_option("--builder", abuilder,
                            "matrix{n}, triangular{n}, product{n}, truncated{k}, or a group name for its group algebra");
  check_algebra->add_option("--n", n_param, "Size for builders given without a suffix");
  check_algebra->add_option("--file", afile, "Algebra JSON file");
  check_algebra->add_option("--sub", sub, "scalars (default), whole, diagonal, subgroup:<gens> or span:<json vectors>");
  check_algebra->add_option("--field", field, "Q or cyclotomic:m (builders only)");
  check_algebra->add_option("--checks", checks_list, "Comma-separated subset of checks (default all)");
  check_algebra->add_option("--seed", seed, "Seed for randomized steps");

  auto* table = app.add_subcommand("table", "Character table export");
  table->add_option("--builder", gsrc.builder, "S{n}, A{n}, C{n}, D{n} or Q8");
  table->add_option("--file", gsrc.file, "Group JSON file");

  CLI11_PARSE(app, argc, argv);

  json report{{"schema", kSchema}, {"input", json::object()}, {"results", json::array()}};
  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };
  try {
    if (check_group->parsed()) {
      json file_json;
      auto g = load_group(gsrc, opt.cap(), report["input"], &file_json);
      SubgroupEmbedding emb;
      if (!subgroup.empty()) {
        emb = subgroup_from_text(g, subgroup);
      } else if (file_json.contains("subgroup")) {
        emb = subgroup_from_json(g, file_json.at("subgroup"));
      } else {
        throw ParseError("give --subgroup");
      }
      report["input"]["subgroup"] = generators_string(*emb.subgroup);
      report["results"].push_back(group_check_json(emb, linear));
    } else if (sweep->parsed()) {
      auto g = load_group(gsrc, opt.cap(), report["input"]);
      report["results"].push_back(sweep_json(g, exhaustive, linear));
    } else if (check_algebra->parsed()) {
      if (abuilder.empty() == afile.empty()) throw ParseError("give exactly one of --builder and --file");
      const auto checks = checks_list.empty() ? all_algebra_checks() : split_checks(checks_list);
      std::size_t conductor = 1;
      if (!afile.empty()) {
        conductor = field_conductor(read_json_file(afile));
      } else if (field.rfind("cyclotomic:", 0) == 0) {
        conductor = std::stoul(field.substr(11));
      } else if (field != "Q") {
        throw ParseError("field must be Q or cyclotomic:m");
      }
      report["input"]["field"] = conductor == 1 ? json("Q") : json({{"cyclotomic", conductor}});
      report["results"] =
          conductor == 1
              ? run_algebra<Rational>(abuilder, n_param, afile, sub, checks, seed, opt.cap(), report["input"])
              : run_algebra<Cyclotomic>(abuilder, n_param, afile, sub, checks, seed, opt.cap(), report["input"]);
    } else if (table->parsed()) {
      auto g = load_group(gsrc, opt.cap(), report["input"]);
      auto t = character_table(g);
      json r{{"check", "table"}};
      r.update(character_table_json(t));
      report["results"].push_back(r);
    }
  } catch (const Error& e) {
    report["error"] = {{"type", e.kind()}, {"message", e.what()}};
    std::cerr << "depth2-lab: " << e.what() << "\n";
    emit(opt, report, elapsed());
    return 2;
  } catch (const std::exception& e) {
    report["error"] = {{"type", "Error"}, {"message", e.what()}};
    std::cerr << "depth2-lab: " << e.what() << "\n";
    emit(opt, report, elapsed());
    return 2;
  }
  return emit(opt, report, elapsed());
}
