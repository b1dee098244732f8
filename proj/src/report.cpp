#include "ivex/report.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace ivex {

const char* to_string(KernelKind k) {
  return k == KernelKind::Spmv ? "spmv" : "pagerank";
}

KernelKind kernel_from_string(const std::string& s) {
  if (s == "spmv") return KernelKind::Spmv;
  if (s == "pagerank") return KernelKind::PageRank;
  throw InputError("unknown kernel '" + s + "' (expected spmv or pagerank)");
}

DistributionReport build_report(const std::string& dataset,
                                const std::vector<PatternClass>& classes,
                                const SeedLayout& layout, VectorShape shape,
                                const CostModel& policy) {
  const int W = shape.width;
  DistributionReport r;
  r.dataset = dataset;
  r.width = W;
  r.classes = classes.size();
  r.gather.assign(W + 2, 0.0);
  r.scatter.assign(W + 2, 0.0);
  r.combined.assign(W + 2, 0.0);
  r.reduction.assign(shape.log2w() + 1, 0.0);

  for (const PatternClass& pc : classes) {
    uint64_t n = pc.member_count;
    r.groups += n;
    for (const SiteFeature& s : pc.shape.sites) {
      if (s.kind != SiteKind::IndirectLoad) continue;
      r.gather[std::min(s.cover.flag, W + 1)] += static_cast<double>(n);
      r.gather_instances += n;
    }
    r.scatter[std::min(pc.shape.store_cover.flag, W + 1)] += static_cast<double>(n);
    r.scatter_instances += n;
    r.reduction[pc.shape.reduction.flag] += static_cast<double>(n);

    CostReport cr = cost_of(pc, layout, shape, policy);
    for (const SiteCost& sc : cr.sites) {
      if (sc.kind == SiteKind::DirectLoad) continue;
      r.cost.gather_orig_index_bits += n * sc.orig_index_bits;
      r.cost.gather_opt_index_bits += n * sc.opt_index_bits;
      r.cost.gather_orig_data_bits += n * sc.orig_data_bits;
      r.cost.gather_opt_data_bits += n * sc.opt_data_bits;
      r.cost.gather_info_bits += n * sc.info_bits;
      (sc.replaced ? r.cost.gather_sites_replaced : r.cost.gather_sites_kept) += n;
    }
    if (cr.has_reduction) {
      const ReductionCost& rc = cr.reduction;
      r.cost.red_orig_calc += n * rc.orig_calc;
      r.cost.red_orig_red += n * rc.orig_red;
      r.cost.red_opt_calc += n * rc.opt_calc;
      r.cost.red_opt_red += n * rc.opt_red;
      r.cost.red_opt_perm += n * rc.opt_perm;
      r.cost.red_orig_bits +=
          n * (rc.orig_widx_bits + rc.orig_wdata_bits + rc.orig_store_bits);
      r.cost.red_opt_bits +=
          n * (rc.opt_widx_bits + rc.opt_wdata_bits + rc.opt_store_bits);
      r.cost.red_info_bits += n * rc.opt_info_bits;
    }
  }

  auto normalize = [](std::vector<double>& hist, uint64_t total) {
    if (total == 0) return;
    for (double& v : hist) v /= static_cast<double>(total);
  };
  for (size_t f = 0; f < r.combined.size(); ++f)
    r.combined[f] = r.gather[f] + r.scatter[f];
  normalize(r.gather, r.gather_instances);
  normalize(r.scatter, r.scatter_instances);
  normalize(r.combined, r.gather_instances + r.scatter_instances);
  normalize(r.reduction, r.groups);
  return r;
}

namespace {

nlohmann::json hist_json(const std::vector<double>& hist, int first_flag, int width) {
  nlohmann::json j = nlohmann::json::object();
  for (size_t f = first_flag; f < hist.size(); ++f) {
    std::string key = static_cast<int>(f) == width + 1 ? "irreplaceable" : std::to_string(f);
    j[key] = hist[f];
  }
  return j;
}

}  // namespace

std::string report_to_json(const DistributionReport& r) {
  nlohmann::json j;
  j["schema"] = 1;
  j["dataset"] = r.dataset;
  j["kernel"] = r.kernel;
  j["width"] = r.width;
  j["groups"] = r.groups;
  j["classes"] = r.classes;
  j["gather_instances"] = r.gather_instances;
  j["scatter_instances"] = r.scatter_instances;
  j["histograms"]["gather"] = hist_json(r.gather, 1, r.width);
  j["histograms"]["scatter"] = hist_json(r.scatter, 1, r.width);
  j["histograms"]["combined"] = hist_json(r.combined, 1, r.width);
  j["histograms"]["reduction"] = hist_json(r.reduction, 0, r.width);
  nlohmann::json c;
  c["gather_orig_index_bits"] = r.cost.gather_orig_index_bits;
  c["gather_opt_index_bits"] = r.cost.gather_opt_index_bits;
  c["gather_orig_data_bits"] = r.cost.gather_orig_data_bits;
  c["gather_opt_data_bits"] = r.cost.gather_opt_data_bits;
  c["gather_info_bits"] = r.cost.gather_info_bits;
  c["gather_sites_replaced"] = r.cost.gather_sites_replaced;
  c["gather_sites_kept"] = r.cost.gather_sites_kept;
  c["red_orig_calc"] = r.cost.red_orig_calc;
  c["red_orig_red"] = r.cost.red_orig_red;
  c["red_opt_calc"] = r.cost.red_opt_calc;
  c["red_opt_red"] = r.cost.red_opt_red;
  c["red_opt_perm"] = r.cost.red_opt_perm;
  c["red_orig_bits"] = r.cost.red_orig_bits;
  c["red_opt_bits"] = r.cost.red_opt_bits;
  c["red_info_bits"] = r.cost.red_info_bits;
  j["cost"] = c;
  return j.dump(2);
}

std::string report_to_csv(const DistributionReport& r) {
  std::ostringstream os;
  os << "dataset,site_kind,flag,fraction\n";
  char buf[512];
  auto emit = [&](const char* kind, const std::string& flag, double frac) {
    std::snprintf(buf, sizeof buf, "%s,%s,%s,%.17g\n", r.dataset.c_str(), kind,
                  flag.c_str(), frac);
    os << buf;
  };
  auto emit_hist = [&](const char* kind, const std::vector<double>& hist, int first) {
    for (size_t f = first; f < hist.size(); ++f) {
      std::string key =
          static_cast<int>(f) == r.width + 1 ? "irreplaceable" : std::to_string(f);
      emit(kind, key, hist[f]);
    }
  };
  emit_hist("gather", r.gather, 1);
  emit_hist("scatter", r.scatter, 1);
  emit_hist("combined", r.combined, 1);
  emit_hist("reduction", r.reduction, 0);
  return os.str();
}

namespace {

bool parse_dims(const std::string& tok, int64_t& a, int64_t& b) {
  size_t x = tok.find('x');
  if (x == std::string::npos) return false;
  try {
    a = std::stoll(tok.substr(0, x));
    b = std::stoll(tok.substr(x + 1));
  } catch (...) {
    return false;
  }
  return true;
}

CooMatrix matrix_from_spec(const std::string& input, std::string& name,
                           uint64_t rng_seed) {
  if (input.rfind("dense:", 0) == 0) {
    int64_t r, c;
    if (!parse_dims(input.substr(6), r, c))
      throw InputError("bad dense spec '" + input + "' (want dense:RxC)");
    name = input;
    return gen_dense(r, c);
  }
  if (input.rfind("random:", 0) == 0) {
    std::istringstream ss(input.substr(7));
    std::string dims, nnz_s, seed_s;
    std::getline(ss, dims, ':');
    std::getline(ss, nnz_s, ':');
    std::getline(ss, seed_s, ':');
    int64_t r, c;
    if (!parse_dims(dims, r, c) || nnz_s.empty())
      throw InputError("bad random spec '" + input + "' (want random:RxC:NNZ[:SEED])");
    uint64_t seed = seed_s.empty() ? rng_seed : std::stoull(seed_s);
    name = input;
    return gen_random(r, c, std::stoll(nnz_s), seed);
  }
  std::ifstream f(input);
  if (!f) throw InputError("cannot open '" + input + "'");
  name = std::filesystem::path(input).filename().string();
  return parse_matrix_market(f);
}

bool looks_like_matrix_market(const std::string& path) {
  std::ifstream f(path);
  std::string first;
  std::getline(f, first);
  return first.rfind("%%MatrixMarket", 0) == 0;
}

}  // namespace

Dataset load_dataset(const std::string& input, KernelKind kernel, ElemKind data_kind,
                     uint64_t rng_seed) {
  Dataset ds;
  if (kernel == KernelKind::Spmv) {
    CooMatrix m = matrix_from_spec(input, ds.name, rng_seed);
    ds.seed = build_spmv_seed(m.nnz(), data_kind);
    ds.bindings = spmv_bindings(m, data_kind);
    return ds;
  }
  EdgeList g;
  bool synthetic = input.rfind("dense:", 0) == 0 || input.rfind("random:", 0) == 0;
  if (synthetic || looks_like_matrix_market(input)) {
    CooMatrix m = matrix_from_spec(input, ds.name, rng_seed);
    g = edges_from_matrix(m);
  } else {
    std::ifstream f(input);
    if (!f) throw InputError("cannot open '" + input + "'");
    ds.name = std::filesystem::path(input).filename().string();
    g = parse_edge_list(f, -1);
  }
  ds.seed = build_pagerank_seed(g.n_edges(), data_kind);
  ds.bindings = pagerank_bindings(g, data_kind);
  return ds;
}

DistributionReport analyze_dataset(const std::string& input, KernelKind kernel,
                                   VectorShape shape, const CostModel& policy,
                                   uint64_t rng_seed,
                                   std::vector<PatternClass>* classes_out) {
  Dataset ds = load_dataset(input, kernel, ElemKind::F64, rng_seed);
  auto violations = validate_seed(ds.seed);
  if (!violations.empty()) throw ExecError("invalid seed: " + violations.front());
  SeedLayout layout = analyze_seed(ds.seed);
  ClassAccumulator acc(layout.combine, layout.data_kind, shape, false);
  scan_feature_columns(ds.seed, layout, ds.bindings, shape,
                       [&](FeatureColumn&& col) { acc.insert(col); });
  DistributionReport r = build_report(ds.name, acc.classes(), layout, shape, policy);
  r.kernel = to_string(kernel);
  if (classes_out) *classes_out = acc.take();
  return r;
}

CorpusReport run_corpus(const std::string& directory, KernelKind kernel,
                        VectorShape shape, const CostModel& policy) {
  namespace fs = std::filesystem;
  std::vector<std::string> files;
  std::error_code ec;
  fs::directory_iterator it(directory, ec);
  if (ec) throw InputError("cannot read directory '" + directory + "': " + ec.message());
  for (const auto& e : it)
    if (e.is_regular_file() && e.path().extension() == ".mtx")
      files.push_back(e.path().string());
  std::sort(files.begin(), files.end());

  CorpusReport out;
  std::vector<std::future<DistributionReport>> futs;
  futs.reserve(files.size());
  for (const std::string& f : files)
    futs.push_back(std::async(std::launch::async, [&, f] {
      return analyze_dataset(f, kernel, shape, policy);
    }));
  for (size_t i = 0; i < futs.size(); ++i) {
    try {
      out.datasets.push_back(futs[i].get());
    } catch (const Error& e) {
      out.warnings.push_back(files[i] + ": " + e.what());
    }
  }
  std::sort(out.datasets.begin(), out.datasets.end(),
            [](const auto& a, const auto& b) { return a.dataset < b.dataset; });

  const double band_cut[3] = {0.25, 0.50, 0.75};
  out.bands.assign(shape.width, {0.0, 0.0, 0.0});
  if (!out.datasets.empty()) {
    for (const DistributionReport& r : out.datasets) {
      double cum = 0.0;
      for (int x = 1; x <= shape.width; ++x) {
        cum += r.gather[x];
        for (int b = 0; b < 3; ++b)
          if (cum > band_cut[b]) out.bands[x - 1][b] += 1.0;
      }
    }
    for (auto& row : out.bands)
      for (double& v : row) v /= static_cast<double>(out.datasets.size());
  }
  return out;
}

std::string corpus_to_json(const CorpusReport& r, int width) {
  nlohmann::json j;
  j["schema"] = 1;
  j["n_datasets"] = r.datasets.size();
  j["warnings"] = r.warnings;
  nlohmann::json ds = nlohmann::json::array();
  for (const DistributionReport& d : r.datasets)
    ds.push_back(nlohmann::json::parse(report_to_json(d)));
  j["datasets"] = ds;
  nlohmann::json bands = nlohmann::json::array();
  for (int x = 0; x < width; ++x) {
    nlohmann::json row;
    row["vloads"] = x + 1;
    row["share_over_25"] = r.bands[x][0];
    row["share_over_50"] = r.bands[x][1];
    row["share_over_75"] = r.bands[x][2];
    bands.push_back(row);
  }
  j["bands"] = bands;
  return j.dump(2);
}

std::string corpus_to_csv(const CorpusReport& r, int width) {
  std::ostringstream os;
  os << "dataset,site_kind,flag,fraction\n";
  for (const DistributionReport& d : r.datasets) {
    std::string csv = report_to_csv(d);
    os << csv.substr(csv.find('\n') + 1);  // drop per-report header
  }
  char buf[160];
  for (int x = 0; x < width; ++x)
    for (int b = 0; b < 3; ++b) {
      std::snprintf(buf, sizeof buf, "_aggregate,band_%d,%d,%.17g\n", 25 * (b + 1),
                    x + 1, r.bands[x][b]);
      os << buf;
    }
  return os.str();
}

}  // namespace ivex
