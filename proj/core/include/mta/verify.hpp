#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mta/closure.hpp"
#include "mta/group.hpp"
#include "mta/scalar.hpp"
#include "mta/tensor.hpp"

namespace mta {

struct CampaignConfig {
  std::vector<std::string> groups;  // empty: the whole catalogue
  std::vector<int> ns;              // empty: {1,2,3}, except {2,4} for sp
  // Cap on k+l of verified grades. -1 picks the default schedule:
  // permutation-family groups to 6 (exact mode), the rest to 4 (float mode).
  int max_degree = -1;
  int headroom = 2;
  std::string mode = "auto";  // auto | exact | float
  double tol = kDefaultRankTol;
  int samples = 2000;  // Haar samples per Monte-Carlo batch; 0 disables
  std::uint64_t seed = 1;
  std::string out_path;  // JSON report path; the CSV lands beside it
  std::string dump_dir;  // mismatch artifacts are written here when nonempty

  void validate() const;  // throws std::invalid_argument
};

// One unit of campaign work: every grade of one group at one n.
struct CampaignTask {
  GroupSpec group;
  int max_degree = 4;
  ScalarMode mode = ScalarMode::kFloat;  // oracle and span comparisons
  bool galois = false;                   // also run Monte-Carlo records
};

std::vector<CampaignTask> campaign_tasks(const CampaignConfig& config);

struct VerificationRecord {
  std::string kind;  // "fft" | "galois"
  std::string group;
  int n = 0;
  int k = 0;
  int l = 0;
  std::string mode;  // "exact" | "float"
  int dim_oracle = -1;
  // fft records: dimension of the catalogue spanning set. galois records:
  // dimension of the Monte-Carlo estimate (first batch).
  int dim_fft = -1;
  int dim_closure = -1;    // galois records: -1
  int dim_fft_nomut = -1;  // sp only: the reading without mutations
  int dim_mc_second = -1;  // galois only: second batch dimension
  bool equal = false;
  bool skipped = false;
  bool headroom_stable = true;
  double residual = 0.0;
  std::string note;
  long long elapsed_ms = 0;  // measured; excluded from serialized reports
};

// Per-(group, n) shared state: the seeds' exact closure over the working
// window and its stability under one extra unit of headroom.
struct FftContext {
  GroupSpec group;
  ScalarMode mode = ScalarMode::kFloat;
  int max_degree = 4;
  double tol = kDefaultRankTol;
  bool closure_stable = false;
  GradedBasisTable table;
};

// Seeds whose contraction closure should reproduce the group's invariant
// spaces: the generators the catalogue assigns it, cut to max_degree.
std::vector<MixedTensor> closure_seeds(const GroupSpec& group, int max_degree);

FftContext make_fft_context(const GroupSpec& group, int max_degree, int headroom,
                            ScalarMode mode, double tol);

// Compares oracle, catalogue span, and closure at one grade.
VerificationRecord verify_fft(const FftContext& ctx, int k, int l);

// Compares the group's algebraic oracle against the Monte-Carlo invariant
// space of its compact form (o: real orthogonal; u: unitary; sl: special
// unitary). samples == 0 yields a skipped record.
VerificationRecord verify_galois_consequence(const GroupSpec& group, int k, int l,
                                             int samples, std::uint64_t seed,
                                             double tol);

struct CampaignResult {
  std::vector<VerificationRecord> records;
  int passed = 0;
  int failed = 0;
  int skipped = 0;
  bool all_passed = false;
  int exit_code = 0;  // 0: all passed (or skipped); 1: some check failed
  std::string report_json;
  std::string report_csv;
};

// Runs every task, in parallel across (group, n), with a deterministic
// ordered reduction; writes report files when config.out_path is set.
// Throws std::invalid_argument on bad config and std::runtime_error on I/O
// failure (CLI exit code 2); check failures use exit_code 1 instead.
CampaignResult run_campaign(const CampaignConfig& config);

}  // namespace mta
