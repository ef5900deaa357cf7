#include "mta/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

#include "mta/generators.hpp"
#include "mta/oracle.hpp"
#include "mta/subspace.hpp"

namespace mta {

namespace {

std::vector<std::string> default_group_names() {
  return {"gl", "u",  "sl", "slk:2",  "monomial", "o",
          "so", "sp", "sn", "sn_pm", "an",       "an_pm"};
}

bool galois_eligible(const GroupSpec& g) {
  return g.tag == GroupTag::kO || g.tag == GroupTag::kU || g.tag == GroupTag::kSL;
}

CompactFamily compact_form(const GroupSpec& g) {
  switch (g.tag) {
    case GroupTag::kO: return CompactFamily::kRealOrthogonal;
    case GroupTag::kU: return CompactFamily::kUnitary;
    case GroupTag::kSL: return CompactFamily::kSpecialUnitary;
    default:
      throw std::invalid_argument("no compact-form sampler for " + g.name());
  }
}

std::uint64_t record_seed(std::uint64_t base, const std::string& label) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : label) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  std::uint64_t s = base ^ h;
  s += 0x9E3779B97F4A7C15ull;
  s = (s ^ (s >> 30)) * 0xBF58476D1CE4E5B9ull;
  s = (s ^ (s >> 27)) * 0x94D049BB133111EBull;
  return s ^ (s >> 31);
}

SubspaceBasis float_basis_of(const SubspaceBasis& b, double tol) {
  SpanBuilder sb(b.n, b.k, b.l, ScalarMode::kFloat, tol);
  for (int i = 0; i < b.dim(); ++i) sb.add(b.row_tensor(i));
  return sb.finalize();
}

double max_row_residual(const SubspaceBasis& container, const SubspaceBasis& member) {
  double res = 0.0;
  for (int i = 0; i < member.dim(); ++i) {
    res = std::max(res, container.residual(member.row_tensor(i)));
  }
  return res;
}

}  // namespace

void CampaignConfig::validate() const {
  if (mode != "auto" && mode != "exact" && mode != "float") {
    throw std::invalid_argument("mode must be auto, exact, or float");
  }
  if (max_degree == 0 || max_degree < -1) {
    throw std::invalid_argument("max degree must be >= 1");
  }
  if (headroom < 0) throw std::invalid_argument("headroom must be >= 0");
  if (samples != 0 && samples < 100) {
    throw std::invalid_argument(
        "sample count must be 0 (Monte-Carlo disabled) or >= 100");
  }
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  for (int n : ns) {
    if (n < 1) throw std::invalid_argument("n values must be >= 1");
  }
  for (const std::string& name : groups) {
    if (name != "all") parse_group_name(name, 2);  // throws on unknown names
  }
}

std::vector<CampaignTask> campaign_tasks(const CampaignConfig& config) {
  config.validate();
  std::vector<std::string> names;
  bool expand_all = config.groups.empty();
  for (const std::string& name : config.groups) {
    if (name == "all") {
      expand_all = true;
    } else {
      names.push_back(name);
    }
  }
  if (expand_all) {
    for (std::string& name : default_group_names()) names.push_back(std::move(name));
  }

  std::vector<CampaignTask> tasks;
  for (const std::string& name : names) {
    bool is_sp = parse_group_name(name, 2).tag == GroupTag::kSp;
    std::vector<int> ns;
    if (!config.ns.empty()) {
      for (int n : config.ns) {
        if (!is_sp || n % 2 == 0) ns.push_back(n);
      }
    } else {
      ns = is_sp ? std::vector<int>{2, 4} : std::vector<int>{1, 2, 3};
    }
    for (int n : ns) {
      CampaignTask t;
      t.group = parse_group_name(name, n);
      t.group.validate();
      bool perm = is_permutation_family(t.group.tag);
      t.max_degree = config.max_degree >= 1 ? config.max_degree : (perm ? 6 : 4);
      if (config.mode == "exact") {
        t.mode = ScalarMode::kExact;
      } else if (config.mode == "float") {
        t.mode = ScalarMode::kFloat;
      } else {
        t.mode = perm ? ScalarMode::kExact : ScalarMode::kFloat;
      }
      t.galois = galois_eligible(t.group);
      tasks.push_back(std::move(t));
    }
  }
  return tasks;
}

std::vector<MixedTensor> closure_seeds(const GroupSpec& group, int max_degree) {
  group.validate();
  const int n = group.n;
  std::vector<MixedTensor> seeds = {identity_tensor(n, ScalarMode::kExact)};
  switch (group.tag) {
    case GroupTag::kGL:
    case GroupTag::kU:
      break;
    case GroupTag::kSL:
      seeds.push_back(det_tensor(n, ScalarMode::kExact));
      break;
    case GroupTag::kSLk:
      seeds.push_back(generator_tensor(
          GeneratorId{GeneratorTag::kDetPower, group.k_param, {}}, n,
          ScalarMode::kExact));
      break;
    case GroupTag::kMonomial:
      seeds.push_back(j_tensor(n, 2, ScalarMode::kExact));
      break;
    case GroupTag::kO:
      seeds.push_back(f_tensor(n, ScalarMode::kExact));
      break;
    case GroupTag::kSO:
      seeds.push_back(det_tensor(n, ScalarMode::kExact));
      seeds.push_back(f_tensor(n, ScalarMode::kExact));
      break;
    case GroupTag::kSp:
      seeds.push_back(s_tensor(n, ScalarMode::kExact));
      break;
    case GroupTag::kSymmetric:
      for (int m = 1; m <= max_degree; ++m) {
        seeds.push_back(h_tensor(n, m, ScalarMode::kExact));
      }
      break;
    case GroupTag::kSigned:
      for (int m = 2; m <= max_degree; m += 2) {
        seeds.push_back(h_tensor(n, m, ScalarMode::kExact));
      }
      break;
    case GroupTag::kAlternating:
      for (int m = 1; m <= max_degree; ++m) {
        seeds.push_back(h_tensor(n, m, ScalarMode::kExact));
      }
      seeds.push_back(det_tensor(n, ScalarMode::kExact));
      break;
    case GroupTag::kSignedAlternating:
      for (int m = 2; m <= max_degree; m += 2) {
        seeds.push_back(h_tensor(n, m, ScalarMode::kExact));
      }
      seeds.push_back(det_tensor(n, ScalarMode::kExact));
      break;
  }
  return seeds;
}

FftContext make_fft_context(const GroupSpec& group, int max_degree, int headroom,
                            ScalarMode mode, double tol) {
  FftContext ctx;
  ctx.group = group;
  ctx.mode = mode;
  ctx.max_degree = max_degree;
  ctx.tol = tol;
  std::vector<MixedTensor> seeds = closure_seeds(group, max_degree);
  ClosureOptions opt;
  opt.cap_k = max_degree;
  opt.cap_l = max_degree;
  opt.degree_cap = max_degree;
  opt.headroom = headroom;
  opt.mode = ScalarMode::kExact;  // integer seeds; comparisons convert later
  opt.tol = tol;
  ctx.table = closure(seeds, opt);
  ClosureOptions wider = opt;
  wider.headroom = headroom + 1;
  GradedBasisTable widened = closure(seeds, wider);
  ctx.closure_stable = ctx.table.converged && widened.converged &&
                       tables_agree_on_reported(ctx.table, widened);
  return ctx;
}

VerificationRecord verify_fft(const FftContext& ctx, int k, int l) {
  auto start = std::chrono::steady_clock::now();
  VerificationRecord r;
  r.kind = "fft";
  r.group = ctx.group.name();
  r.n = ctx.group.n;
  r.k = k;
  r.l = l;
  r.mode = to_string(ctx.mode);
  r.headroom_stable = ctx.closure_stable;
  try {
    SubspaceBasis oracle = invariant_space(ctx.group, k, l, ctx.mode, ctx.tol);
    // The sp catalogue's honest reading omits mutations; the comparison uses
    // the mutation-closed reading and reports the narrow one alongside.
    bool sp = ctx.group.tag == GroupTag::kSp;
    SubspaceBasis fft =
        fft_span(ctx.group, ctx.group.n, k, l, ctx.mode, ctx.tol,
                 sp ? MutationPolicy::kForceOn : MutationPolicy::kCatalog);
    if (sp) {
      r.dim_fft_nomut =
          fft_span(ctx.group, ctx.group.n, k, l, ctx.mode, ctx.tol,
                   MutationPolicy::kCatalog)
              .dim();
    }
    const SubspaceBasis& closure_basis = ctx.table.at(k, l);
    r.dim_oracle = oracle.dim();
    r.dim_fft = fft.dim();
    r.dim_closure = closure_basis.dim();
    bool dims_equal = r.dim_oracle == r.dim_fft && r.dim_fft == r.dim_closure;
    if (ctx.mode == ScalarMode::kExact) {
      r.equal = dims_equal && equal_spaces(oracle, fft) &&
                equal_spaces(fft, closure_basis);
    } else {
      SubspaceBasis closure_f = float_basis_of(closure_basis, ctx.tol);
      double res = std::max({max_row_residual(oracle, fft),
                             max_row_residual(fft, closure_f),
                             max_row_residual(closure_f, oracle)});
      r.residual = res;
      r.equal = dims_equal && res <= ctx.tol;
    }
  } catch (const std::exception& e) {
    r.equal = false;
    r.note = e.what();
  }
  r.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                     std::chrono::steady_clock::now() - start)
                     .count();
  return r;
}

VerificationRecord verify_galois_consequence(const GroupSpec& group, int k, int l,
                                             int samples, std::uint64_t seed,
                                             double tol) {
  auto start = std::chrono::steady_clock::now();
  VerificationRecord r;
  r.kind = "galois";
  r.group = group.name();
  r.n = group.n;
  r.k = k;
  r.l = l;
  r.mode = "float";
  r.headroom_stable = true;  // no closure involved
  if (samples == 0) {
    r.skipped = true;
    r.note = "monte-carlo disabled (samples = 0)";
    return r;
  }
  try {
    SubspaceBasis oracle = invariant_space(group, k, l, ScalarMode::kFloat, tol);
    MonteCarloResult mc = monte_carlo_invariant_space(compact_form(group), group.n,
                                                      k, l, samples, seed, tol);
    r.dim_oracle = oracle.dim();
    r.dim_fft = mc.dim_first;
    r.dim_mc_second = mc.dim_second;
    // Sampling noise makes this a diagnostic, not a gate; dimensions gate.
    r.residual = max_row_residual(oracle, mc.space);
    r.equal = r.dim_oracle == r.dim_fft;
  } catch (const std::exception& e) {
    r.equal = false;
    r.note = e.what();
  }
  r.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                     std::chrono::steady_clock::now() - start)
                     .count();
  return r;
}

namespace {

nlohmann::ordered_json record_to_json(const VerificationRecord& r) {
  nlohmann::ordered_json j;
  j["kind"] = r.kind;
  j["group"] = r.group;
  j["n"] = r.n;
  j["k"] = r.k;
  j["l"] = r.l;
  j["mode"] = r.mode;
  j["dim_oracle"] = r.dim_oracle;
  j["dim_fft"] = r.dim_fft;
  j["dim_closure"] = r.dim_closure;
  j["dim_fft_nomut"] = r.dim_fft_nomut;
  j["dim_mc_second"] = r.dim_mc_second;
  j["equal"] = r.equal;
  j["skipped"] = r.skipped;
  j["headroom_stable"] = r.headroom_stable;
  j["residual"] = r.residual;
  j["note"] = r.note;
  return j;
}

bool record_passes(const VerificationRecord& r) {
  return r.skipped || (r.equal && r.headroom_stable);
}

struct DumpItem {
  std::string filename;
  std::string content;
};

std::string sanitize(const std::string& name) {
  std::string out = name;
  for (char& c : out) {
    if (!std::isalnum(static_cast<unsigned char>(c))) c = '_';
  }
  return out;
}

struct TaskOutput {
  std::vector<VerificationRecord> records;
  std::vector<DumpItem> dumps;
};

void maybe_dump_fft(const CampaignTask& task, const FftContext* ctx,
                    const VerificationRecord& r, std::vector<DumpItem>& dumps) {
  nlohmann::ordered_json j;
  j["record"] = record_to_json(r);
  if (ctx != nullptr) {
    try {
      SubspaceBasis oracle =
          invariant_space(task.group, r.k, r.l, task.mode, ctx->tol);
      bool sp = task.group.tag == GroupTag::kSp;
      SubspaceBasis fft =
          fft_span(task.group, task.group.n, r.k, r.l, task.mode, ctx->tol,
                   sp ? MutationPolicy::kForceOn : MutationPolicy::kCatalog);
      j["oracle"] = nlohmann::ordered_json::parse(subspace_to_json(oracle));
      j["fft"] = nlohmann::ordered_json::parse(subspace_to_json(fft));
      j["closure"] =
          nlohmann::ordered_json::parse(subspace_to_json(ctx->table.at(r.k, r.l)));
    } catch (const std::exception& e) {
      j["dump_error"] = e.what();
    }
  }
  std::ostringstream name;
  name << "fft_" << sanitize(r.group) << "_n" << r.n << "_k" << r.k << "_l" << r.l
       << ".json";
  dumps.push_back({name.str(), j.dump(2) + "\n"});
}

void maybe_dump_galois(const CampaignTask& task, const CampaignConfig& config,
                       const VerificationRecord& r, std::uint64_t seed,
                       std::vector<DumpItem>& dumps) {
  nlohmann::ordered_json j;
  j["record"] = record_to_json(r);
  try {
    SubspaceBasis oracle =
        invariant_space(task.group, r.k, r.l, ScalarMode::kFloat, config.tol);
    MonteCarloResult mc = monte_carlo_invariant_space(
        compact_form(task.group), task.group.n, r.k, r.l, config.samples, seed,
        config.tol);
    j["oracle"] = nlohmann::ordered_json::parse(subspace_to_json(oracle));
    j["monte_carlo"] = nlohmann::ordered_json::parse(subspace_to_json(mc.space));
  } catch (const std::exception& e) {
    j["dump_error"] = e.what();
  }
  std::ostringstream name;
  name << "galois_" << sanitize(r.group) << "_n" << r.n << "_k" << r.k << "_l"
       << r.l << ".json";
  dumps.push_back({name.str(), j.dump(2) + "\n"});
}

TaskOutput run_task(const CampaignTask& task, const CampaignConfig& config) {
  TaskOutput out;
  std::optional<FftContext> ctx;
  std::string ctx_error;
  try {
    ctx = make_fft_context(task.group, task.max_degree, config.headroom, task.mode,
                           config.tol);
  } catch (const std::exception& e) {
    ctx_error = e.what();
  }

  for (int k = 0; k <= task.max_degree; ++k) {
    for (int l = 0; k + l <= task.max_degree; ++l) {
      VerificationRecord r;
      if (ctx) {
        r = verify_fft(*ctx, k, l);
      } else {
        r.kind = "fft";
        r.group = task.group.name();
        r.n = task.group.n;
        r.k = k;
        r.l = l;
        r.mode = to_string(task.mode);
        r.equal = false;
        r.headroom_stable = false;
        r.note = "closure construction failed: " + ctx_error;
      }
      if (!record_passes(r) && !config.dump_dir.empty()) {
        maybe_dump_fft(task, ctx ? &*ctx : nullptr, r, out.dumps);
      }
      out.records.push_back(std::move(r));
    }
  }

  if (task.galois) {
    int cap = std::min(4, task.max_degree);
    for (int k = 0; k <= cap; ++k) {
      for (int l = 0; k + l <= cap; ++l) {
        std::ostringstream label;
        label << "galois/" << task.group.name() << "/" << task.group.n << "/" << k
              << "/" << l;
        std::uint64_t seed = record_seed(config.seed, label.str());
        VerificationRecord r = verify_galois_consequence(task.group, k, l,
                                                         config.samples, seed,
                                                         config.tol);
        if (!record_passes(r) && !config.dump_dir.empty()) {
          maybe_dump_galois(task, config, r, seed, out.dumps);
        }
        out.records.push_back(std::move(r));
      }
    }
  }
  return out;
}

std::string build_report_json(const CampaignConfig& config,
                              const std::vector<VerificationRecord>& records,
                              int passed, int failed, int skipped) {
  nlohmann::ordered_json j;
  j["config"]["groups"] = config.groups;
  j["config"]["ns"] = config.ns;
  j["config"]["max_degree"] = config.max_degree;
  j["config"]["headroom"] = config.headroom;
  j["config"]["mode"] = config.mode;
  j["config"]["tol"] = config.tol;
  j["config"]["samples"] = config.samples;
  j["config"]["seed"] = config.seed;
  j["records"] = nlohmann::ordered_json::array();
  for (const VerificationRecord& r : records) {
    j["records"].push_back(record_to_json(r));
  }
  j["summary"]["total"] = records.size();
  j["summary"]["passed"] = passed;
  j["summary"]["failed"] = failed;
  j["summary"]["skipped"] = skipped;
  j["summary"]["all_passed"] = failed == 0;
  return j.dump(2) + "\n";
}

std::string build_report_csv(const std::vector<VerificationRecord>& records) {
  std::ostringstream os;
  os << "group,n,k,l,dim_oracle,dim_fft,dim_closure,pass\n";
  for (const VerificationRecord& r : records) {
    os << r.group << "," << r.n << "," << r.k << "," << r.l << "," << r.dim_oracle
       << "," << r.dim_fft << "," << r.dim_closure << ","
       << (record_passes(r) ? 1 : 0) << "\n";
  }
  return os.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  out << content;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace

CampaignResult run_campaign(const CampaignConfig& config) {
  std::vector<CampaignTask> tasks = campaign_tasks(config);

  std::vector<TaskOutput> outputs(tasks.size());
  std::atomic<std::size_t> next{0};
  std::size_t worker_count =
      std::min<std::size_t>(tasks.size(),
                            std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::thread> workers;
  std::vector<std::string> worker_errors(worker_count);
  for (std::size_t w = 0; w < worker_count; ++w) {
    workers.emplace_back([&, w] {
      try {
        for (std::size_t i; (i = next.fetch_add(1)) < tasks.size();) {
          outputs[i] = run_task(tasks[i], config);
        }
      } catch (const std::exception& e) {
        worker_errors[w] = e.what();
      }
    });
  }
  for (std::thread& t : workers) t.join();
  for (const std::string& err : worker_errors) {
    if (!err.empty()) throw std::runtime_error("campaign worker failed: " + err);
  }

  CampaignResult result;
  std::vector<DumpItem> dumps;
  for (TaskOutput& out : outputs) {
    for (VerificationRecord& r : out.records) {
      if (r.skipped) {
        ++result.skipped;
      } else if (record_passes(r)) {
        ++result.passed;
      } else {
        ++result.failed;
      }
      result.records.push_back(std::move(r));
    }
    for (DumpItem& d : out.dumps) dumps.push_back(std::move(d));
  }
  result.all_passed = result.failed == 0;
  result.exit_code = result.failed == 0 ? 0 : 1;
  result.report_json = build_report_json(config, result.records, result.passed,
                                         result.failed, result.skipped);
  result.report_csv = build_report_csv(result.records);

  if (!config.dump_dir.empty() && !dumps.empty()) {
    std::filesystem::path dir(config.dump_dir);
    std::filesystem::create_directories(dir);
    for (const DumpItem& d : dumps) write_file(dir / d.filename, d.content);
  }
  if (!config.out_path.empty()) {
    std::filesystem::path json_path(config.out_path);
    write_file(json_path, result.report_json);
    std::filesystem::path csv_path = json_path;
    csv_path.replace_extension(".csv");
    if (csv_path == json_path) csv_path += ".csv";
    write_file(csv_path, result.report_csv);
  }
  return result;
}

}  // namespace mta
