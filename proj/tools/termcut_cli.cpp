#include <chrono>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "termcut/generators.hpp"
#include "termcut/hypercube.hpp"
#include "termcut/jsonio.hpp"
#include "termcut/oneface.hpp"
#include "termcut/profile.hpp"
#include "termcut/quality.hpp"
#include "termcut/sketch.hpp"

namespace {

using namespace termcut;

long elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                               start)
      .count();
}

// Exhaustive below the cap, sampled above it (coordinate masks are folded in
// by callers that have meaningful ones).
QualityReport run_verify(const Instance& g, const Instance& h, int cap, uint64_t seed,
                         size_t samples, const std::vector<uint64_t>& extra = {}) {
  VerifyOptions opts;
  opts.cap = cap;
  opts.seed = seed;
  opts.sample_count = samples;
  opts.extra_masks = extra;
  opts.sampled = g.k() > cap;
  return verify_quality(g, h, opts);
}

int cmd_gen(const std::string& kind, int k, int n, int d, int rows, int cols,
            const std::string& eps_text, uint64_t seed, const std::string& out_path) {
  json j;
  std::string stats;
  if (kind == "quasi-lowerbound") {
    Instance g = gen_profile_lowerbound(k, seed);
    j = graph_to_json(g);
    stats = std::to_string(g.n()) + " vertices, " + std::to_string(g.m()) + " edges, " +
            std::to_string(g.k()) + " terminals";
  } else if (kind == "bhc") {
    BhcInstance b = gen_hypercube_instance(d, parse_weight(eps_text));
    j = graph_to_json(b.instance, b.labels);
    stats = std::to_string(b.instance.n()) + " vertices, " + std::to_string(b.instance.m()) +
            " edges, " + std::to_string(b.instance.k()) + " terminals";
  } else if (kind == "random-quasi") {
    Instance g = gen_random_quasi(k, n, seed);
    j = graph_to_json(g);
    stats = std::to_string(g.n()) + " vertices, " + std::to_string(g.m()) + " edges, " +
            std::to_string(g.k()) + " terminals";
  } else {
    EmbeddedInstance e = gen_grid_oneface(rows, cols, k, seed);
    j = graph_to_json(e);
    stats = std::to_string(e.g.n()) + " vertices, " + std::to_string(e.g.m()) + " edges, " +
            std::to_string(e.g.k()) + " terminals on the outer face";
  }
  write_json_file(j, out_path);
  std::cout << kind << ": " << stats << " -> " << out_path << "\n";
  return 0;
}

void emit_report(const json& report, const std::string& report_path) {
  if (!report_path.empty()) write_json_file(report, report_path);
  std::cout << report.dump(2) << "\n";
}

int cmd_sparsify(const std::string& method, const std::string& in_path,
                 const std::string& out_path, const std::string& report_path,
                 const std::string& eps_text, uint64_t seed, int retries,
                 const std::string& emulator_name, int cap) {
  const auto start = std::chrono::steady_clock::now();
  LoadedGraph in = load_graph(in_path);

  if (method == "exact-profile") {
    SparsifierResult r = exact_sparsifier(in.g);
    QualityReport q = run_verify(in.g, r.h, cap, seed, 64);
    write_json_file(graph_to_json(r.h), out_path);
    json report = make_report("sparsify exact-profile", seed, in.g, r.h, &q, elapsed_ms(start));
    report["output"]["classes"] = r.contraction.classes.size();
    emit_report(report, report_path);
    return 0;
  }

  if (method == "sample") {
    if (!is_quasi_bipartite(in.g))
      throw input_error("sample method needs a quasi-bipartite instance");
    const Weight eps = parse_weight(eps_text);
    const Weight target = 1 + 3 * eps;
    for (int attempt = 0; attempt <= retries; ++attempt) {
      SamplingParams p = make_sampling_params(eps, in.g.k(), seed + attempt);
      ApproxResult r = approx_sparsifier(in.g, p);
      QualityReport q = run_verify(in.g, r.h, cap, seed, 64);
      const bool ok = !q.infinite && q.quality <= target;
      if (ok || attempt == retries) {
        write_json_file(graph_to_json(r.h), out_path);
        json report =
            make_report("sparsify sample", seed + attempt, in.g, r.h, &q, elapsed_ms(start));
        report["epsilon"] = eps_text;
        report["target"] = format_weight(target);
        report["attempts"] = attempt + 1;
        report["achieved"] = ok;
        report["output"]["groups"] = r.group_count;
        report["output"]["important"] = r.important_count;
        emit_report(report, report_path);
        return ok ? 0 : 3;
      }
    }
    return 3;  // unreachable, loop always returns
  }

  if (method == "oneface") {
    if (!in.embedded) throw input_error("oneface method needs rotation and outer_face data");
    const Weight eps = parse_weight(eps_text);
    Emulator emu;
    if (emulator_name == "identity")
      emu = identity_emulator;
    else if (emulator_name == "portal-greedy")
      emu = portal_greedy_emulator;
    else
      throw input_error("unknown emulator: " + emulator_name);
    Instance h = one_face_sparsify(*in.embedded, emu, eps);
    QualityReport q = run_verify(in.g, h, cap, seed, 64);
    write_json_file(graph_to_json(h), out_path);
    json report = make_report("sparsify oneface", seed, in.g, h, &q, elapsed_ms(start));
    report["epsilon"] = eps_text;
    report["emulator"] = emulator_name;
    emit_report(report, report_path);
    return 0;
  }

  throw input_error("unknown method: " + method);
}

int cmd_verify(const std::string& g_path, const std::string& h_path, bool table, int cap,
               size_t samples, bool sampled, uint64_t seed, const std::string& report_path) {
  const auto start = std::chrono::steady_clock::now();
  LoadedGraph g = load_graph(g_path), h = load_graph(h_path);
  if (g.g.k() > cap && !sampled)
    throw input_error("too many terminals for exhaustive verification; pass --sample");

  VerifyOptions opts;
  opts.cap = cap;
  opts.sampled = sampled;
  opts.sample_count = samples;
  opts.seed = seed;
  QualityReport q = verify_quality(g.g, h.g, opts);

  if (table) {
    for (const CutPair& c : q.per_cut) {
      std::cout << "A={";
      for (size_t i = 0; i < c.bipartition.side_a.size(); ++i)
        std::cout << (i ? "," : "") << c.bipartition.side_a[i];
      std::cout << "} input=" << format_weight(c.value_g) << " output=" << format_weight(c.value_h)
                << "\n";
    }
  }
  json report = make_report("verify", seed, g.g, h.g, &q, elapsed_ms(start));
  emit_report(report, report_path);
  return 0;
}

int cmd_bhc_eval(const std::string& b_path, const std::string& h_path,
                 const std::string& map_path, uint64_t seed, const std::string& report_path) {
  const auto start = std::chrono::steady_clock::now();
  LoadedGraph bl = load_graph(b_path);
  if (bl.labels.empty()) throw input_error("hypercube instance file must carry labels");
  LoadedGraph h = load_graph(h_path);

  BhcInstance b;
  b.instance = bl.g;
  b.labels = bl.labels;
  b.d = static_cast<int>(bl.labels.begin()->second.size());
  // the lightest nonzero terminal layer sits at hamming weight eps*d
  int low = b.d;
  for (int t : b.instance.terminals) {
    const std::string& lab = b.labels.at(b.instance.ids[t]);
    int w = 0;
    for (char c : lab) w += c == '1';
    if (w > 0 && w < low) low = w;
  }
  b.epsilon = make_weight(low, b.d);

  ContractionMap cm = make_contraction(b.instance, partition_from_json(read_json_file(map_path)));
  Mapping f = sparsifier_to_mapping(b, h.g, cm);

  const Weight s = stretch(b, f);
  QualityReport q = run_verify(b.instance, h.g, 16, seed, 64,
                               b.instance.k() <= 63 ? coordinate_masks(b) : std::vector<uint64_t>{});
  const bool consistent = q.infinite || s <= q.quality;

  json report = make_report("bhc-eval", seed, b.instance, h.g, &q, elapsed_ms(start));
  report["stretch"] = format_weight(s);
  report["stretch_approx"] = to_double(s);
  report["image_size"] = cm.representatives.size();
  report["stretch_le_quality"] = consistent;
  emit_report(report, report_path);
  return consistent ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cut sparsifiers for quasi-bipartite and one-face planar graphs"};
  // free the -h short flag for the sparsifier option; subcommands inherit this
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate instances");
  gen->require_subcommand(1);
  struct {
    int k = 4, n = 20, d = 4, rows = 4, cols = 4;
    std::string eps = "1/4", out;
    uint64_t seed = 1;
  } g;
  auto add_out = [](CLI::App* c, std::string& out) {
    c->add_option("-o,--output", out, "Output graph file")->required();
  };
  auto* g1 = gen->add_subcommand("quasi-lowerbound", "Star family with packed weights");
  g1->add_option("--k", g.k, "Terminal count")->required();
  g1->add_option("--seed", g.seed, "Seed");
  add_out(g1, g.out);
  auto* g2 = gen->add_subcommand("bhc", "Boolean hypercube instance");
  g2->add_option("--d", g.d, "Dimension (even)")->required();
  g2->add_option("--eps", g.eps, "Layer fraction, rational in (0, 1/2)")->required();
  add_out(g2, g.out);
  auto* g3 = gen->add_subcommand("random-quasi", "Random quasi-bipartite instance");
  g3->add_option("--k", g.k, "Terminal count")->required();
  g3->add_option("--n", g.n, "Vertex count")->required();
  g3->add_option("--seed", g.seed, "Seed");
  add_out(g3, g.out);
  auto* g4 = gen->add_subcommand("grid-oneface", "Grid with perimeter terminals");
  g4->add_option("--rows", g.rows, "Rows")->required();
  g4->add_option("--cols", g.cols, "Columns")->required();
  g4->add_option("--terminals", g.k, "Terminal count")->required();
  g4->add_option("--seed", g.seed, "Seed");
  add_out(g4, g.out);

  // sparsify
  struct {
    std::string in, out, report, eps = "1/2", emulator = "portal-greedy";
    uint64_t seed = 1;
    int retries = 5, cap = 16;
  } s;
  auto* sp = app.add_subcommand("sparsify", "Build a sparsifier");
  sp->require_subcommand(1);
  for (const char* name : {"exact-profile", "sample", "oneface"}) {
    auto* c = sp->add_subcommand(name);
    c->add_option("-g,--graph", s.in, "Input graph file")->required();
    c->add_option("-o,--output", s.out, "Output graph file")->required();
    c->add_option("--report", s.report, "Also write the report here");
    c->add_option("--seed", s.seed, "Seed");
    c->add_option("--cap", s.cap, "Exhaustive verification cap on k");
    if (std::string(name) != "exact-profile") c->add_option("--eps", s.eps, "Epsilon, rational");
    if (std::string(name) == "sample") c->add_option("--retries", s.retries, "Retry budget");
    if (std::string(name) == "oneface")
      c->add_option("--emulator", s.emulator, "identity or portal-greedy");
  }

  // verify
  struct {
    std::string g, h, report;
    bool table = false, sampled = false;
    int cap = 16;
    size_t samples = 64;
    uint64_t seed = 1;
  } v;
  auto* ve = app.add_subcommand("verify", "Compare terminal min-cuts of two instances");
  ve->add_option("-g,--graph", v.g, "Reference graph file")->required();
  ve->add_option("-h,--sparsifier", v.h, "Candidate graph file")->required();
  ve->add_flag("--table", v.table, "Print the per-cut table");
  ve->add_flag("--sample", v.sampled, "Sample bipartitions instead of enumerating");
  ve->add_option("--samples", v.samples, "Sampled bipartition count");
  ve->add_option("--cap", v.cap, "Exhaustive cap on k");
  ve->add_option("--seed", v.seed, "Sampling seed");
  ve->add_option("--report", v.report, "Also write the report here");

  // bhc-eval
  struct {
    std::string b, h, map, report;
    uint64_t seed = 1;
  } be;
  auto* bv = app.add_subcommand("bhc-eval", "Evaluate a hypercube sparsifier as a label mapping");
  bv->add_option("-b,--base", be.b, "Hypercube graph file with labels")->required();
  bv->add_option("-h,--sparsifier", be.h, "Sparsifier graph file")->required();
  bv->add_option("--map", be.map, "Partition file")->required();
  bv->add_option("--seed", be.seed, "Sampling seed");
  bv->add_option("--report", be.report, "Also write the report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) {
      for (auto* c : gen->get_subcommands())
        return cmd_gen(c->get_name(), g.k, g.n, g.d, g.rows, g.cols, g.eps, g.seed, g.out);
    }
    if (sp->parsed()) {
      for (auto* c : sp->get_subcommands())
        return cmd_sparsify(c->get_name(), s.in, s.out, s.report, s.eps, s.seed, s.retries,
                            s.emulator, s.cap);
    }
    if (ve->parsed())
      return cmd_verify(v.g, v.h, v.table, v.cap, v.samples, v.sampled, v.seed, v.report);
    if (bv->parsed()) return cmd_bhc_eval(be.b, be.h, be.map, be.seed, be.report);
  } catch (const input_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
