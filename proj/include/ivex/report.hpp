#pragma once

#include <string>
#include <vector>

#include "ivex/ingest.hpp"
#include "ivex/plan.hpp"
#include "ivex/vvm.hpp"

namespace ivex {

enum class KernelKind : uint8_t { Spmv, PageRank };

const char* to_string(KernelKind k);
KernelKind kernel_from_string(const std::string& s);

// Bit-level cost totals over all groups of a dataset. The gather_* fields
// pool indirect-load and store cover sites (the combined gather/scatter
// view); the red_* fields cover the reduction half of the store.
struct CostAggregate {
  uint64_t gather_orig_index_bits = 0, gather_opt_index_bits = 0;
  uint64_t gather_orig_data_bits = 0, gather_opt_data_bits = 0;
  uint64_t gather_info_bits = 0;
  uint64_t gather_sites_replaced = 0, gather_sites_kept = 0;
  uint64_t red_orig_calc = 0, red_orig_red = 0;
  uint64_t red_opt_calc = 0, red_opt_red = 0, red_opt_perm = 0;
  uint64_t red_orig_bits = 0, red_opt_bits = 0, red_info_bits = 0;
};

// Flag distributions in the shape of the paper-style per-dataset table:
// fraction of gather/scatter site instances per window count (plus an
// irreplaceable bucket at width+1) and fraction of groups per reduction
// step count 0..log2(width).
struct DistributionReport {
  std::string dataset;
  std::string kernel;
  int width = 8;
  uint64_t groups = 0;
  uint64_t classes = 0;
  uint64_t gather_instances = 0;
  uint64_t scatter_instances = 0;
  std::vector<double> gather;     // index by flag, 1..width and width+1
  std::vector<double> scatter;
  std::vector<double> combined;   // gather and scatter instances pooled
  std::vector<double> reduction;  // index by flag, 0..log2(width)
  CostAggregate cost;
};

DistributionReport build_report(const std::string& dataset,
                                const std::vector<PatternClass>& classes,
                                const SeedLayout& layout, VectorShape shape,
                                const CostModel& policy);

std::string report_to_json(const DistributionReport& r);
std::string report_to_csv(const DistributionReport& r);

// Dataset resolution shared by the CLI subcommands. Accepts a file path
// (MatrixMarket, or SNAP edge list for the pagerank kernel) or a synthetic
// spec: "dense:RxC" or "random:RxC:NNZ_PER_ROW[:SEED]". `rng_seed` is the
// seed used when a random spec omits its own.
struct Dataset {
  std::string name;
  CodeSeed seed;
  Bindings bindings;
};

Dataset load_dataset(const std::string& input, KernelKind kernel,
                     ElemKind data_kind = ElemKind::F64, uint64_t rng_seed = 1);

DistributionReport analyze_dataset(const std::string& input, KernelKind kernel,
                                   VectorShape shape, const CostModel& policy,
                                   uint64_t rng_seed = 1,
                                   std::vector<PatternClass>* classes_out = nullptr);

struct CorpusReport {
  std::vector<DistributionReport> datasets;  // sorted by name
  std::vector<std::string> warnings;         // unparseable files, skipped
  // bands[x-1][b]: fraction of datasets whose gather sites replaceable with
  // at most x vloads exceed band b of {25%, 50%, 75%}.
  std::vector<std::array<double, 3>> bands;
};

CorpusReport run_corpus(const std::string& directory, KernelKind kernel,
                        VectorShape shape, const CostModel& policy);

std::string corpus_to_json(const CorpusReport& r, int width);
std::string corpus_to_csv(const CorpusReport& r, int width);

}  // namespace ivex
