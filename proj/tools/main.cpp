#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "mta/closure.hpp"
#include "mta/generators.hpp"
#include "mta/group.hpp"
#include "mta/scalar.hpp"
#include "mta/tensor_io.hpp"
#include "mta/verify.hpp"

namespace {

mta::ScalarMode parse_mode(const std::string& text) {
  if (text == "exact") return mta::ScalarMode::kExact;
  if (text == "float") return mta::ScalarMode::kFloat;
  throw std::invalid_argument("mode must be exact or float, got '" + text + "'");
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << content;
  if (!out) throw std::runtime_error("failed writing " + path);
}

int run_verify(const mta::CampaignConfig& config) {
  mta::CampaignResult result = mta::run_campaign(config);
  for (const mta::VerificationRecord& r : result.records) {
    bool ok = r.skipped || (r.equal && r.headroom_stable);
    if (!ok) {
      std::cout << "FAIL " << r.kind << " " << r.group << " n=" << r.n
                << " (" << r.k << "," << r.l << ")"
                << " oracle=" << r.dim_oracle << " fft=" << r.dim_fft
                << " closure=" << r.dim_closure
                << (r.headroom_stable ? "" : " [headroom unstable]");
      if (!r.note.empty()) std::cout << " note: " << r.note;
      std::cout << "\n";
    }
  }
  std::cout << "records: " << result.records.size() << " passed: " << result.passed
            << " failed: " << result.failed << " skipped: " << result.skipped
            << "\n";
  return result.exit_code;
}

int run_gen(const std::string& name, int n, const std::string& mode,
            const std::string& out_path) {
  mta::GeneratorId id = mta::parse_generator_name(name);
  mta::MixedTensor t = mta::generator_tensor(id, n, parse_mode(mode));
  write_output(out_path, mta::tensor_to_json(t) + "\n");
  return 0;
}

int run_closure(const std::vector<std::string>& gen_names,
                const std::string& seeds_path, int n, mta::ClosureOptions options,
                const std::string& mode, const std::string& out_path) {
  options.mode = parse_mode(mode);
  std::vector<mta::MixedTensor> seeds;
  if (!gen_names.empty()) {
    if (n < 1) {
      throw std::invalid_argument("--seed-gen requires --n");
    }
    for (const std::string& name : gen_names) {
      seeds.push_back(
          mta::generator_tensor(mta::parse_generator_name(name), n, options.mode));
    }
  }
  if (!seeds_path.empty()) {
    std::ifstream in(seeds_path);
    if (!in) throw std::runtime_error("cannot open " + seeds_path);
    std::string line;
    while (std::getline(in, line)) {
      if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
      seeds.push_back(mta::tensor_from_json(line));
    }
  }
  if (seeds.empty()) {
    throw std::invalid_argument("no seeds: pass --seed-gen and/or --seeds-file");
  }
  mta::GradedBasisTable table = mta::closure(seeds, options);
  write_output(out_path, mta::closure_table_to_json(table));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mixed tensor algebra toolkit"};
  app.require_subcommand(1);

  mta::CampaignConfig config;
  CLI::App* verify = app.add_subcommand(
      "verify", "compare invariant-space oracles, catalogue spans, and closures");
  verify->add_option("--group", config.groups,
                     "group name (repeatable), or 'all' for the catalogue");
  verify->add_option("--n", config.ns, "dimension n (repeatable)")->delimiter(',');
  verify->add_option("--max-degree", config.max_degree,
                     "cap on k+l; -1 picks the per-family default schedule");
  verify->add_option("--headroom", config.headroom, "closure window headroom");
  verify->add_option("--mode", config.mode, "auto, exact, or float");
  verify->add_option("--tol", config.tol, "rank tolerance");
  verify->add_option("--samples", config.samples,
                     "Monte-Carlo samples per batch; 0 disables those records");
  verify->add_option("--seed", config.seed, "campaign random seed");
  verify->add_option("--out", config.out_path,
                     "JSON report path; the CSV is written beside it");
  verify->add_option("--dump-on-fail", config.dump_dir,
                     "directory for per-mismatch basis dumps");

  std::string gen_name;
  int gen_n = 0;
  std::string gen_mode = "exact";
  std::string gen_out;
  CLI::App* gen =
      app.add_subcommand("gen", "emit a catalogue generator tensor as JSON");
  gen->add_option("--name", gen_name,
                  "identity, det, j:k, f, h:k, g:k, s, alt:k1,..,kn")
      ->required();
  gen->add_option("--n", gen_n, "ambient dimension")->required();
  gen->add_option("--mode", gen_mode, "exact or float");
  gen->add_option("--out", gen_out, "output path (default stdout)");

  std::vector<std::string> closure_gens;
  std::string closure_seeds_path;
  int closure_n = 0;
  mta::ClosureOptions closure_options;
  std::string closure_mode = "exact";
  std::string closure_out;
  CLI::App* closure = app.add_subcommand(
      "closure", "graded contraction closure of seed tensors, as JSON");
  closure->add_option("--seed-gen", closure_gens,
                      "generator name seed (repeatable; requires --n)");
  closure->add_option("--seeds-file", closure_seeds_path,
                      "file with one tensor JSON per line");
  closure->add_option("--n", closure_n, "ambient dimension for --seed-gen");
  closure->add_option("--cap-k", closure_options.cap_k, "reported contravariant cap");
  closure->add_option("--cap-l", closure_options.cap_l, "reported covariant cap");
  closure->add_option("--headroom", closure_options.headroom,
                      "extra working grades beyond the caps");
  closure->add_option("--degree-cap", closure_options.degree_cap,
                      "cap on reported k+l; -1 means cap-k + cap-l");
  closure->add_option("--mode", closure_mode, "exact or float");
  closure->add_option("--tol", closure_options.tol, "rank tolerance");
  closure->add_option("--out", closure_out, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (verify->parsed()) return run_verify(config);
    if (gen->parsed()) return run_gen(gen_name, gen_n, gen_mode, gen_out);
    if (closure->parsed()) {
      return run_closure(closure_gens, closure_seeds_path, closure_n,
                         closure_options, closure_mode, closure_out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
