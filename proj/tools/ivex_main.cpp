#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "ivex/report.hpp"
#include "ivex/verify.hpp"

namespace {

// Exit codes: 0 success, 1 verification failure, 2 input error, 3 usage error.
constexpr int kExitOk = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitInputError = 2;
constexpr int kExitUsage = 3;

using namespace ivex;

struct CommonOpts {
  std::string input;
  std::string kernel = "spmv";
  int width = 8;
  int threshold = -1;  // -1: default policy
  std::string policy_file;
  std::string data = "f64";
  std::string format = "json";
  std::string out;
  uint64_t seed = 1;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool needs_input = true) {
  if (needs_input)
    cmd->add_option("input", o.input,
                    "dataset: path, dense:RxC, or random:RxC:NNZ[:SEED]")
        ->required();
  cmd->add_option("--kernel", o.kernel, "kernel: spmv | pagerank");
  cmd->add_option("--width", o.width, "vector lane count (power of two, 2..16)");
  cmd->add_option("--threshold", o.threshold,
                  "max vloads per replaced gather (default 2)");
  cmd->add_option("--policy", o.policy_file, "cost model JSON file");
  cmd->add_option("--data", o.data, "element kind: f64 | f32 | i64");
  cmd->add_option("--format", o.format, "output format: json | csv");
  cmd->add_option("--out", o.out, "write output to file instead of stdout");
  cmd->add_option("--seed", o.seed, "rng seed for random: specs without one");
}

ElemKind data_kind(const std::string& s) {
  if (s == "f64") return ElemKind::F64;
  if (s == "f32") return ElemKind::F32;
  if (s == "i64") return ElemKind::I64;
  throw InputError("unknown data kind '" + s + "' (expected f64, f32 or i64)");
}

CostModel make_policy(const CommonOpts& o, VectorShape shape) {
  CostModel m = default_policy(shape);
  if (!o.policy_file.empty()) {
    std::ifstream f(o.policy_file);
    if (!f) throw InputError("cannot open policy file '" + o.policy_file + "'");
    m = load_cost_model(f, shape);
  }
  if (o.threshold >= 0) m.gather_threshold = o.threshold;
  return m;
}

void emit(const CommonOpts& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text << "\n";
    return;
  }
  std::ofstream f(o.out);
  if (!f) throw InputError("cannot write '" + o.out + "'");
  f << text << "\n";
}

int cmd_analyze(const CommonOpts& o, bool dump_classes) {
  VectorShape shape = VectorShape::make(o.width);
  CostModel policy = make_policy(o, shape);
  std::vector<PatternClass> classes;
  DistributionReport r = analyze_dataset(o.input, kernel_from_string(o.kernel), shape,
                                         policy, o.seed, &classes);
  if (o.format == "csv" || !dump_classes) {
    emit(o, o.format == "csv" ? report_to_csv(r) : report_to_json(r));
    return kExitOk;
  }
  // Per-class dump of the canonical column shape behind each hash.
  nlohmann::json j = nlohmann::json::parse(report_to_json(r));
  nlohmann::json jc = nlohmann::json::array();
  for (const PatternClass& pc : classes) {
    nlohmann::json e;
    e["hash"] = hex64(pc.hash);
    e["members"] = pc.member_count;
    e["tail_mask"] = pc.shape.tail_mask;
    nlohmann::json flags = nlohmann::json::array();
    for (const SiteFeature& s : pc.shape.sites) {
      nlohmann::json sf;
      sf["kind"] = to_string(s.kind);
      sf["flag"] = s.cover.flag;
      flags.push_back(sf);
    }
    e["sites"] = flags;
    e["store_flag"] = pc.shape.store_cover.flag;
    e["reduction_flag"] = pc.shape.reduction.flag;
    e["distinct_addrs"] = pc.shape.reduction.distinct_addrs;
    std::string key_hex;
    key_hex.reserve(pc.key.size() * 2);
    for (uint8_t bv : pc.key) {
      char hx[3];
      std::snprintf(hx, sizeof hx, "%02x", bv);
      key_hex += hx;
    }
    e["canonical_key"] = key_hex;
    jc.push_back(e);
  }
  j["classes_detail"] = jc;
  emit(o, j.dump(2));
  return kExitOk;
}

int cmd_verify(const CommonOpts& o) {
  VectorShape shape = VectorShape::make(o.width);
  CostModel policy = make_policy(o, shape);
  ElemKind kind = data_kind(o.data);
  Dataset ds = load_dataset(o.input, kernel_from_string(o.kernel), kind, o.seed);

  auto reference = snapshot_outputs(ds.seed, ds.bindings);
  scalar_execute(ds.seed, ds.bindings);
  auto expected = snapshot_outputs(ds.seed, ds.bindings);
  restore_outputs(ds.seed, ds.bindings, reference);
  run_plan(ds.seed, ds.bindings, shape, policy);
  auto got = snapshot_outputs(ds.seed, ds.bindings);

  double rel = kind == ElemKind::F32 ? 1e-4 : 1e-9;
  double floor = kind == ElemKind::F32 ? 1e-6 : 1e-12;
  bool pass = true;
  double max_abs = 0, max_rel = 0;
  for (size_t k = 0; k < got.size(); ++k) {
    DiffResult d = diff_outputs(got[k], expected[k], kind);
    max_abs = std::max(max_abs, d.max_abs);
    max_rel = std::max(max_rel, d.max_rel);
    if (is_integer(kind) ? d.mismatches != 0
                         : !within_tolerance(got[k], expected[k], kind, rel, floor))
      pass = false;
  }
  std::cout << (pass ? "PASS" : "FAIL") << " dataset=" << ds.name
            << " max_abs=" << max_abs << " max_rel=" << max_rel << "\n";
  return pass ? kExitOk : kExitVerifyFail;
}

int cmd_run(const CommonOpts& o, int repeat, bool dump_programs) {
  VectorShape shape = VectorShape::make(o.width);
  CostModel policy = make_policy(o, shape);
  Dataset ds =
      load_dataset(o.input, kernel_from_string(o.kernel), data_kind(o.data), o.seed);

  auto initial = snapshot_outputs(ds.seed, ds.bindings);
  PlannedKernel plan = prepare_plan(ds.seed, ds.bindings, shape, policy);

  ExecStats stats;
  uint64_t checksum = 0;
  for (int pass = 0; pass < std::max(1, repeat); ++pass) {
    restore_outputs(ds.seed, ds.bindings, initial);
    ExecStats s = execute_plan(plan, ds.bindings);
    if (pass > 0 && !(s == stats))
      throw ExecError("nondeterministic executor stats across repeats");
    stats = s;
    checksum = output_checksum(ds.seed, ds.bindings);
  }

  nlohmann::json j = nlohmann::json::parse(stats_to_json(stats));
  j["dataset"] = ds.name;
  j["kernel"] = o.kernel;
  j["width"] = o.width;
  j["repeat"] = std::max(1, repeat);
  j["checksum"] = hex64(checksum);
  j["classes"] = plan.classes.size();
  j["groups"] = plan.group_count;

  DistributionReport agg =
      build_report(ds.name, plan.classes, plan.layout, shape, policy);
  nlohmann::json jagg = nlohmann::json::parse(report_to_json(agg));
  j["cost_aggregate"] = jagg["cost"];

  nlohmann::json costs = nlohmann::json::array();
  for (size_t c = 0; c < plan.classes.size(); ++c) {
    CostReport cr = cost_of(plan.classes[c], plan.layout, shape, policy);
    nlohmann::json jc;
    jc["class"] = c;
    jc["members"] = plan.classes[c].member_count;
    if (cr.has_reduction) {
      jc["reduction_flag"] = cr.reduction.flag;
      jc["distinct_addrs"] = cr.reduction.distinct_addrs;
      jc["table1_original"] = {cr.reduction.orig_calc, cr.reduction.orig_red,
                               cr.reduction.orig_perm};
      jc["table1_optimized"] = {cr.reduction.opt_calc, cr.reduction.opt_red,
                                cr.reduction.opt_perm};
    }
    nlohmann::json sites = nlohmann::json::array();
    for (const SiteCost& sc : cr.sites) {
      nlohmann::json js;
      js["kind"] = to_string(sc.kind);
      js["flag"] = sc.flag;
      js["replaced"] = sc.replaced;
      js["profitable"] = sc.profitable;
      js["orig_index_bits"] = sc.orig_index_bits;
      js["opt_index_bits"] = sc.opt_index_bits;
      js["info_bits"] = sc.info_bits;
      sites.push_back(js);
    }
    jc["sites"] = sites;
    costs.push_back(jc);
  }
  j["cost"] = costs;
  if (dump_programs) {
    nlohmann::json progs = nlohmann::json::array();
    for (const VectorProgram& p : plan.programs)
      progs.push_back(nlohmann::json::parse(program_to_json(p)));
    j["programs"] = progs;
  }
  emit(o, j.dump(2));
  return kExitOk;
}

int cmd_corpus(const CommonOpts& o) {
  VectorShape shape = VectorShape::make(o.width);
  CostModel policy = make_policy(o, shape);
  CorpusReport r = run_corpus(o.input, kernel_from_string(o.kernel), shape, policy);
  emit(o, o.format == "csv" ? corpus_to_csv(r, shape.width)
                            : corpus_to_json(r, shape.width));
  for (const std::string& w : r.warnings) std::cerr << "warning: " << w << "\n";
  return kExitOk;
}

int cmd_gen(const std::string& spec, const std::string& out) {
  CooMatrix m;
  if (spec.rfind("dense:", 0) == 0) {
    long long r = 0, c = 0;
    if (std::sscanf(spec.c_str(), "dense:%lldx%lld", &r, &c) != 2)
      throw InputError("bad dense spec '" + spec + "' (want dense:RxC)");
    m = gen_dense(r, c);
  } else if (spec.rfind("random:", 0) == 0) {
    long long r = 0, c = 0, nnz = 0;
    unsigned long long seed = 1;
    if (std::sscanf(spec.c_str(), "random:%lldx%lld:%lld:%llu", &r, &c, &nnz, &seed) < 3)
      throw InputError("bad random spec '" + spec + "' (want random:RxC:NNZ[:SEED])");
    m = gen_random(r, c, nnz, seed);
  } else {
    throw InputError("gen expects dense:RxC or random:RxC:NNZ[:SEED]");
  }
  if (out.empty()) {
    write_matrix_market(std::cout, m);
  } else {
    std::ofstream f(out);
    if (!f) throw InputError("cannot write '" + out + "'");
    write_matrix_market(f, m);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"inspector-executor vectorizer for irregular kernels"};
  app.require_subcommand(1);

  CommonOpts analyze_o, verify_o, run_o, corpus_o;
  int repeat = 1;
  bool dump_programs = false;
  bool dump_classes = false;
  std::string gen_spec, gen_out;

  CLI::App* analyze = app.add_subcommand("analyze", "pattern distribution report");
  add_common(analyze, analyze_o);
  analyze->add_flag("--classes", dump_classes, "include per-class canonical dumps");

  CLI::App* verify = app.add_subcommand("verify", "vector plan vs scalar oracle");
  add_common(verify, verify_o);

  CLI::App* run = app.add_subcommand("run", "execute and report stats + costs");
  add_common(run, run_o);
  run->add_option("--repeat", repeat, "executor passes over one analysis");
  run->add_flag("--dump-programs", dump_programs, "include program JSON dumps");

  CLI::App* corpus = app.add_subcommand("corpus", "analyze a directory of .mtx files");
  add_common(corpus, corpus_o);

  CLI::App* gen = app.add_subcommand("gen", "emit a synthetic matrix as MatrixMarket");
  gen->add_option("spec", gen_spec, "dense:RxC or random:RxC:NNZ[:SEED]")->required();
  gen->add_option("--out", gen_out, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (app.got_subcommand(analyze)) return cmd_analyze(analyze_o, dump_classes);
    if (app.got_subcommand(verify)) return cmd_verify(verify_o);
    if (app.got_subcommand(run)) return cmd_run(run_o, repeat, dump_programs);
    if (app.got_subcommand(corpus)) return cmd_corpus(corpus_o);
    if (app.got_subcommand(gen)) return cmd_gen(gen_spec, gen_out);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitVerifyFail;
  }
  return kExitUsage;
}
