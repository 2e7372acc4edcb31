#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <iostream>
#include <sstream>
#include <thread>

#include "segrelab/segrelab.hpp"

using namespace segrelab;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  for (std::string item; std::getline(in, item, ',');) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int cmd_build(const std::string& spec_path, const std::string& out_path) {
  const auto built = build_from_config_text(read_file(spec_path));
  const auto text = dump(to_json(built));
  if (out_path.empty() || out_path == "-")
    std::cout << text;
  else
    write_file(out_path, text);
  std::cerr << built.structure.num_points() << " points, " << built.structure.num_lines() << " lines\n";
  return kExitOk;
}

// Properties are "name" or "name=true|false"; affine axioms need parallel classes in the file.
int cmd_check(const std::string& in_path, const std::string& props) {
  const auto file = parse_incidence(read_file(in_path));
  const auto items = split_list(props);
  if (items.empty()) fail(ErrorKind::ParseError, "empty property list");
  Json records = Json::array();
  bool all_match = true;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    const std::string name = item.substr(0, eq);
    std::optional<bool> expected;
    if (eq != std::string::npos) {
      const auto v = item.substr(eq + 1);
      if (v != "true" && v != "false") fail(ErrorKind::ParseError, "expected value must be true or false: " + item);
      expected = v == "true";
    }
    bool value;
    if (const auto prop = parse_property(name)) {
      value = check_property(file.structure, *prop);
    } else if (const auto ax = parse_affine_axiom(name)) {
      if (!file.parallel) fail(ErrorKind::ParseError, name + " needs parallel_classes in the input");
      value = check_affine_axiom(*file.parallel, *ax);
    } else {
      fail(ErrorKind::ParseError, "unknown property '" + name + "'");
    }
    const bool match = !expected || *expected == value;
    all_match = all_match && match;
    Json r{{"property", name}, {"value", value}};
    if (expected) r["expected"] = *expected;
    records.push_back(r);
    std::cout << name << ": " << (value ? "true" : "false") << (match ? "" : "  (expected otherwise)") << "\n";
  }
  return all_match ? kExitOk : kExitFail;
}

struct VerifyOptions {
  std::string suites = "all";
  std::uint64_t seed = 0;
  int workers = 1;
  std::string report;
  int max_points = 0;
  int p = 0;
  bool timing = true;
};

std::vector<SuiteRecord> run_pool(const std::vector<const SuiteDef*>& defs, const SuiteParams& params, int workers) {
  std::vector<SuiteRecord> out(defs.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < defs.size();) out[i] = run_suite(*defs[i], params);
  };
  const int n = std::max(1, std::min<int>(workers, static_cast<int>(defs.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return out;
}

int cmd_verify(const VerifyOptions& opt) {
  std::vector<const SuiteDef*> defs;
  if (opt.suites == "all") {
    for (const auto& d : suite_registry()) defs.push_back(&d);
  } else {
    for (const auto& id : split_list(opt.suites)) {
      const auto* d = find_suite(id);
      if (!d) {
        std::cerr << "unknown suite '" << id << "'; registered suites:\n";
        for (const auto& s : suite_registry()) std::cerr << "  " << s.id << "\n";
        return kExitUsage;
      }
      if (std::find(defs.begin(), defs.end(), d) == defs.end()) defs.push_back(d);
    }
    std::sort(defs.begin(), defs.end(), [](const SuiteDef* a, const SuiteDef* b) { return a->id < b->id; });
  }
  if (defs.empty()) fail(ErrorKind::ParseError, "no suites selected");

  SuiteParams params;
  params.seed = opt.seed;
  if (opt.max_points > 0) params.max_points = opt.max_points;
  if (opt.p > 0) params.p = opt.p;

  const auto start = std::chrono::steady_clock::now();
  const auto records = run_pool(defs, params, opt.workers);
  const double total = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

  int pass = 0, failed = 0, skipped = 0;
  Json entries = Json::array();
  for (const auto& r : records) {
    switch (r.outcome.status) {
      case SuiteStatus::Pass: ++pass; break;
      case SuiteStatus::Fail: ++failed; break;
      case SuiteStatus::SkippedHypothesis: ++skipped; break;
    }
    entries.push_back(to_json(r, opt.timing));
    std::cout << to_string(r.outcome.status) << "  " << r.suite_id << "  [" << r.statement << "]  "
              << r.outcome.instance << (r.outcome.outside_hypothesis ? "  (char 2)" : "") << "\n      "
              << r.outcome.detail << "\n";
  }
  const int n = static_cast<int>(records.size());
  std::cout << "PASS " << pass << "/" << n << " (FAIL " << failed << ", SKIPPED-HYPOTHESIS " << skipped << ")\n";

  if (!opt.report.empty()) {
    Json report{{"environment",
                 {{"tool", "segrelab"},
                  {"compiler", __VERSION__},
                  {"cxx_standard", static_cast<long>(__cplusplus)}}},
                {"config",
                 {{"suites", opt.suites},
                  {"seed", opt.seed},
                  {"max_points", params.max_points},
                  {"p", opt.p > 0 ? Json(opt.p) : Json(nullptr)}}},
                {"records", entries},
                {"summary", {{"pass", pass}, {"fail", failed}, {"skipped_hypothesis", skipped}, {"total", n}}}};
    if (opt.timing) report["total_ms"] = std::round(total * 1000) / 1000;
    write_file(opt.report, dump(report));
  }
  return failed == 0 ? kExitOk : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Segre products of partial linear spaces: build, check, verify"};
  app.require_subcommand(1);

  std::string spec_path, out_path;
  auto* build = app.add_subcommand("build", "build a structure from a JSON config");
  build->add_option("-s,--spec", spec_path, "config file")->required();
  build->add_option("-o,--out", out_path, "output incidence JSON (default stdout)");

  std::string in_path, props;
  auto* check = app.add_subcommand("check", "evaluate properties of an incidence JSON file");
  check->add_option("-i,--input", in_path, "incidence JSON file")->required();
  check->add_option("-p,--props", props, "comma-separated properties, optionally name=true|false")->required();

  VerifyOptions vopt;
  auto* verify = app.add_subcommand("verify", "run verification suites");
  verify->add_option("--suites", vopt.suites, "comma-separated suite ids or 'all'");
  verify->add_option("--seed", vopt.seed, "seed for randomized suites");
  verify->add_option("--workers", vopt.workers, "worker threads")->check(CLI::PositiveNumber);
  verify->add_option("--report", vopt.report, "JSON report path");
  verify->add_option("--max-points", vopt.max_points, "carrier point cap")->check(CLI::PositiveNumber);
  verify->add_option("--p", vopt.p, "field size override")->check(CLI::PositiveNumber);
  verify->add_flag("!--no-timing", vopt.timing, "omit wall times from the report");
  bool list = false;
  verify->add_flag("--list", list, "list registered suites and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*build) return cmd_build(spec_path, out_path);
    if (*check) return cmd_check(in_path, props);
    if (list) {
      for (const auto& s : suite_registry()) std::cout << s.id << "  " << s.statement << "\n";
      return kExitOk;
    }
    return cmd_verify(vopt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
