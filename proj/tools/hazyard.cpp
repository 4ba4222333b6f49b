// hazyard: dangerous-container placement in a terminal block.
//
//   hazyard generate --dims 10x10x4 --fill 75 --mix t1=1,t2=7,t3=7,t4=20 --seed 1
//   hazyard run --snapshot instance.snap --strategy cabs --seed 7 --out results
//   hazyard batch --strategy cabs --runs 100 --out results --format csv
//   hazyard sweep --axis fill --values 50,70,90 --runs 50 --out results
//   hazyard verify --trace results/trace.txt
//   hazyard plot --csv results/sweep_fill.csv --format svg --out results
//
// Exit codes: 0 success, 1 unsafe but completed, 2 usage error,
// 3 verification failure.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hazyard/experiment.hpp"
#include "hazyard/oracle.hpp"
#include "hazyard/strategy.hpp"

namespace {

using namespace hazyard;

constexpr int kExitOk = 0;
constexpr int kExitUnsafe = 1;
constexpr int kExitUsage = 2;
constexpr int kExitVerification = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string dims = "10x10x4";
  std::string pitch = "4.5,6.5,2.6";
  double fill_pct = 75.0;
  std::string mix = "t1=1,t2=7,t3=7,t4=20";
  std::string strategy = "cabs";
  std::string weighting = "inverse_neighbourhood";
  std::uint64_t seed = 0;
  std::size_t runs = 1;
  std::size_t run_index = 0;
  std::optional<std::size_t> budget;
  std::size_t tabu = kDefaultTabuCapacity;
  std::size_t candidates = 10;
  std::string rules_file;
  std::string snapshot_file;
  std::string trace_file;
  std::string csv_file;
  std::string out_dir;
  std::string format = "csv";
  std::string axis;
  std::string values;
  bool compare = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const std::string& dir, const std::string& name, const std::string& content) {
  if (dir.empty()) {
    std::cout << content;
    return;
  }
  std::filesystem::create_directories(dir);
  const auto path = std::filesystem::path(dir) / name;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  if (!out) throw Error("cannot write " + path.string());
  std::cerr << "wrote " << path.string() << '\n';
}

YardDimensions parse_dims(const std::string& text) {
  YardDimensions d;
  char x1 = 0, x2 = 0;
  std::istringstream in(text);
  if (!(in >> d.rows >> x1 >> d.slots >> x2 >> d.tiers) || x1 != 'x' || x2 != 'x' || !in.eof()) {
    throw UsageError("dimensions must look like RxSxT, got '" + text + "'");
  }
  return d;
}

void apply_pitch(YardDimensions& d, const std::string& text) {
  char c1 = 0, c2 = 0;
  std::istringstream in(text);
  if (!(in >> d.row_pitch >> c1 >> d.slot_pitch >> c2 >> d.tier_pitch) || c1 != ',' || c2 != ',') {
    throw UsageError("pitch must look like r,s,t, got '" + text + "'");
  }
}

RuleMatrix load_rules(const Options& o) {
  return o.rules_file.empty() ? RuleMatrix::default_matrix() : parse_rules(read_file(o.rules_file));
}

StrategyParams make_params(const Options& o) {
  const auto strategy = parse_strategy(o.strategy);
  if (!strategy) throw UsageError("unknown strategy '" + o.strategy + "'");
  auto p = StrategyParams::defaults(*strategy);
  if (o.budget) p.movement_budget = *o.budget;
  p.tabu_capacity = o.tabu;
  p.candidate_set_size = o.candidates;
  p.seed = o.seed;
  const auto w = WeightingPolicy::parse(o.weighting);
  if (!w) throw UsageError("unknown weighting '" + o.weighting + "'");
  p.weighting = *w;
  return p;
}

ExperimentSpec make_spec(const Options& o) {
  ExperimentSpec spec;
  spec.dims = parse_dims(o.dims);
  apply_pitch(spec.dims, o.pitch);
  spec.fill = o.fill_pct / 100.0;
  spec.mix = TypeMix::parse(o.mix);
  spec.params = make_params(o);
  spec.runs = o.runs;
  spec.master_seed = o.seed;
  spec.validate();
  return spec;
}

OutputFormat output_format(const Options& o) {
  const auto f = parse_format(o.format);
  if (!f) throw UsageError("unknown format '" + o.format + "'");
  return *f;
}

void print_stats(const RunStatistics& s) {
  std::cerr << "runs=" << s.runs << " success=" << s.success_rate << "% min=" << s.min_movements
            << " avg=" << s.avg_movements << " max=" << s.max_movements << '\n';
}

int cmd_generate(const Options& o) {
  const auto cfg = generate_instance(make_spec(o), o.run_index);
  write_text(o.out_dir, "instance.snap", save_snapshot(cfg));
  return kExitOk;
}

int cmd_run(const Options& o) {
  if (o.snapshot_file.empty()) throw UsageError("run needs --snapshot FILE");
  const auto m = load_rules(o);
  const YardConfiguration initial = load_snapshot(read_file(o.snapshot_file));
  YardConfiguration cfg = initial;
  const auto outcome = run_strategy(cfg, m, make_params(o));
  write_text(o.out_dir, "trace.txt", format_trace(initial, outcome));
  std::cerr << "status=" << status_name(outcome.status) << " movements=" << outcome.movements
            << " final_worst=" << outcome.final_worst << " final_sum=" << outcome.final_sum << '\n';
  return outcome.status == RunStatus::safe ? kExitOk : kExitUnsafe;
}

int cmd_batch(const Options& o) {
  const auto m = load_rules(o);
  const auto result = run_batch(make_spec(o), m);
  print_stats(result.stats);
  const auto format = output_format(o);
  if (o.out_dir.empty()) {
    if (format == OutputFormat::csv) {
      write_runs_csv(std::cout, result, o.compare);
    } else if (format == OutputFormat::plotdata) {
      write_plotdata(std::cout, result);
    } else {
      write_svg(std::cout, result);
    }
  } else {
    for (const auto& p : emit_outputs(o.out_dir, result, format, o.compare)) std::cerr << "wrote " << p.string() << '\n';
  }
  return kExitOk;
}

std::vector<SweepValue> parse_values(SweepAxis axis, const std::string& text) {
  std::vector<SweepValue> values;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    if (axis == SweepAxis::dims) {
      values.emplace_back(parse_dims(item));
    } else {
      try {
        std::size_t used = 0;
        values.emplace_back(std::stod(item, &used));
        if (used != item.size()) throw std::invalid_argument(item);
      } catch (const std::logic_error&) {
        throw UsageError("sweep value '" + item + "' is not a number");
      }
    }
  }
  if (values.empty()) throw UsageError("sweep needs --values");
  return values;
}

int cmd_sweep(const Options& o) {
  const auto axis = parse_axis(o.axis);
  if (!axis) throw UsageError("--axis must be fill, dims or t1_pct");
  auto values = parse_values(*axis, o.values);
  ExperimentSpec base = make_spec(o);
  if (*axis == SweepAxis::dims) {
    YardDimensions pitches = base.dims;
    for (auto& v : values) {
      auto& d = std::get<YardDimensions>(v);
      d.row_pitch = pitches.row_pitch;
      d.slot_pitch = pitches.slot_pitch;
      d.tier_pitch = pitches.tier_pitch;
    }
  }
  const auto m = load_rules(o);
  const auto result = sweep(base, *axis, values, m);
  for (const auto& p : result.points) {
    std::cerr << axis_name(*axis) << '=' << p.label << ": ";
    print_stats(p.batch.stats);
  }
  const auto format = output_format(o);
  if (o.out_dir.empty()) {
    if (format == OutputFormat::csv) {
      write_sweep_csv(std::cout, result, o.compare);
    } else if (format == OutputFormat::plotdata) {
      write_plotdata(std::cout, result);
    } else {
      write_svg(std::cout, result);
    }
  } else {
    for (const auto& p : emit_outputs(o.out_dir, result, format, o.compare)) std::cerr << "wrote " << p.string() << '\n';
  }
  return kExitOk;
}

int cmd_verify(const Options& o) {
  if (o.trace_file.empty()) throw UsageError("verify needs --trace FILE");
  const auto trace = parse_trace(read_file(o.trace_file));
  const auto report = oracle::verify_trace(trace, load_rules(o));
  std::cout << report.summary() << '\n';
  return report.passed() ? kExitOk : kExitVerification;
}

int cmd_plot(const Options& o) {
  if (o.csv_file.empty()) throw UsageError("plot needs --csv FILE (a sweep CSV)");
  const auto sweep_result = read_sweep_csv(read_file(o.csv_file));
  const auto format = output_format(o);
  if (format == OutputFormat::csv) throw UsageError("plot renders plotdata or svg");
  std::ostringstream out;
  const std::string stem = "sweep_" + std::string(axis_name(sweep_result.axis));
  if (format == OutputFormat::plotdata) {
    write_plotdata(out, sweep_result);
    write_text(o.out_dir, stem + ".dat", out.str());
  } else {
    write_svg(out, sweep_result);
    write_text(o.out_dir, stem + ".svg", out.str());
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dangerous-container placement simulator for a terminal block"};
  app.require_subcommand(1);
  Options o;

  auto add_spec = [&](CLI::App* sub) {
    sub->add_option("--dims", o.dims, "Block size as RxSxT (rows x slots x tiers)");
    sub->add_option("--pitch", o.pitch, "Cell pitch in meters as row,slot,tier");
    sub->add_option("--fill", o.fill_pct, "Occupied cells in percent");
    sub->add_option("--mix", o.mix, "Type percentages, e.g. t1=1,t2=7,t3=7,t4=20 (T5 is the remainder)");
    sub->add_option("--seed", o.seed, "Master seed");
  };
  auto add_strategy = [&](CLI::App* sub) {
    sub->add_option("--strategy", o.strategy, "schelling or cabs");
    sub->add_option("--budget", o.budget, "Movement budget (default 10000 schelling, 1000 cabs)");
    sub->add_option("--tabu", o.tabu, "Tabu memory per container (0 disables)");
    sub->add_option("--candidates", o.candidates, "CABS candidate set size");
    sub->add_option("--weighting", o.weighting, "inverse_neighbourhood or unit");
    sub->add_option("--rules", o.rules_file, "Rules file (default: built-in T1..T5 matrix)");
  };
  auto add_output = [&](CLI::App* sub) {
    sub->add_option("--out", o.out_dir, "Output directory (default: stdout)");
    sub->add_option("--format", o.format, "csv, plotdata or svg");
    sub->add_flag("--compare", o.compare, "Write runtime columns as 0 for byte-identical reruns");
  };

  auto* generate = app.add_subcommand("generate", "Emit a random instance snapshot");
  add_spec(generate);
  generate->add_option("--run", o.run_index, "Run index within the seed's stream");
  generate->add_option("--out", o.out_dir, "Output directory (default: stdout)");

  auto* run = app.add_subcommand("run", "Solve one snapshot and emit its trace");
  run->add_option("--snapshot", o.snapshot_file, "Snapshot file")->required();
  run->add_option("--seed", o.seed, "Strategy seed");
  run->add_option("--out", o.out_dir, "Output directory (default: stdout)");
  add_strategy(run);

  auto* batch = app.add_subcommand("batch", "Run seeded random instances and aggregate statistics");
  add_spec(batch);
  add_strategy(batch);
  add_output(batch);
  batch->add_option("--runs", o.runs, "Number of instances");

  auto* sweep_cmd = app.add_subcommand("sweep", "Run one batch per parameter value");
  add_spec(sweep_cmd);
  add_strategy(sweep_cmd);
  add_output(sweep_cmd);
  sweep_cmd->add_option("--runs", o.runs, "Instances per value");
  sweep_cmd->add_option("--axis", o.axis, "fill, dims or t1_pct")->required();
  sweep_cmd->add_option("--values", o.values, "Comma-separated values (percent, or RxSxT for dims)")->required();

  auto* verify = app.add_subcommand("verify", "Replay and check a trace");
  verify->add_option("--trace", o.trace_file, "Trace file")->required();
  verify->add_option("--rules", o.rules_file, "Rules file (default: built-in T1..T5 matrix)");

  auto* plot = app.add_subcommand("plot", "Render a sweep CSV as plot data or SVG");
  plot->add_option("--csv", o.csv_file, "Sweep CSV")->required();
  plot->add_option("--format", o.format, "plotdata or svg");
  plot->add_option("--out", o.out_dir, "Output directory (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*generate) return cmd_generate(o);
    if (*run) return cmd_run(o);
    if (*batch) return cmd_batch(o);
    if (*sweep_cmd) return cmd_sweep(o);
    if (*verify) return cmd_verify(o);
    if (*plot) return cmd_plot(o);
  } catch (const VerificationError& e) {
    std::cerr << "verification failed: " << e.what() << '\n';
    return kExitVerification;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const hazyard::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitVerification;
  }
  return kExitUsage;
}
