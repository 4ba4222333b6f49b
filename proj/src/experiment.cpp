#include "hazyard/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "hazyard/oracle.hpp"
#include "hazyard/random.hpp"
#include "text.hpp"

namespace hazyard {

namespace {

std::size_t round_half_up(double v) {
  // The epsilon absorbs representation error in products such as 0.75 * 400 * 0.07.
  return static_cast<std::size_t>(std::floor(v + 0.5 + 1e-9));
}

constexpr std::string_view kSummaryColumns =
    "strategy,seed,runs,rows,slots,tiers,fill,t1,t2,t3,t4,weighting,success_rate,successes,min_movements,"
    "avg_movements,max_movements,safe,budget_exhausted,local_minimum,cycle_abort,avg_runtime_ms";

std::string spec_columns(const ExperimentSpec& spec, bool with_runs) {
  std::ostringstream out;
  out << strategy_name(spec.params.strategy) << ',' << spec.master_seed << ',';
  if (with_runs) out << spec.runs << ',';
  out << spec.dims.rows << ',' << spec.dims.slots << ',' << spec.dims.tiers << ',' << text::format_double(spec.fill);
  for (auto t : {T1, T2, T3, T4}) out << ',' << text::format_double(spec.mix.get(t));
  out << ',' << spec.params.weighting.name();
  return out.str();
}

std::string runtime_text(double ms, bool comparison) {
  if (comparison) return "0";
  std::ostringstream out;
  out << std::fixed << std::setprecision(3) << ms;
  return out.str();
}

std::string stats_columns(const RunStatistics& s, bool comparison) {
  std::ostringstream out;
  auto count = [&](RunStatus st) {
    const auto it = s.status_counts.find(st);
    return it == s.status_counts.end() ? std::size_t{0} : it->second;
  };
  out << text::format_double(s.success_rate) << ',' << s.successes << ',' << s.min_movements << ','
      << text::format_double(s.avg_movements) << ',' << s.max_movements << ',' << count(RunStatus::safe) << ','
      << count(RunStatus::budget_exhausted) << ',' << count(RunStatus::local_minimum) << ','
      << count(RunStatus::cycle_abort) << ',' << runtime_text(s.avg_runtime_ms, comparison);
  return out.str();
}

std::string dims_label(const YardDimensions& d) {
  return std::to_string(d.rows) + "x" + std::to_string(d.slots) + "x" + std::to_string(d.tiers);
}

std::filesystem::path open_output(const std::filesystem::path& dir, const std::string& name, std::ofstream& out) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory " + dir.string() + ": " + ec.message());
  const auto path = dir / name;
  out.open(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  return path;
}

void close_output(std::ofstream& out, const std::filesystem::path& path) {
  out.close();
  if (!out) throw Error("failed writing " + path.string());
}

struct Series {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<double> xs;
  std::vector<double> ys;
  bool bars = false;
};

// Minimal single-series chart with axes and tick labels.
void render_svg(std::ostream& out, const std::vector<Series>& panels) {
  constexpr double kWidth = 640.0;
  constexpr double kPanelHeight = 300.0;
  constexpr double kLeft = 70.0;
  constexpr double kRight = 20.0;
  constexpr double kTop = 40.0;
  constexpr double kBottom = 50.0;
  const double height = kPanelHeight * static_cast<double>(panels.size());
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (std::size_t p = 0; p < panels.size(); ++p) {
    const auto& s = panels[p];
    const double y0 = kPanelHeight * static_cast<double>(p);
    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kPanelHeight - kTop - kBottom;
    double xmin = s.xs.empty() ? 0.0 : *std::min_element(s.xs.begin(), s.xs.end());
    double xmax = s.xs.empty() ? 1.0 : *std::max_element(s.xs.begin(), s.xs.end());
    double ymax = s.ys.empty() ? 1.0 : *std::max_element(s.ys.begin(), s.ys.end());
    if (s.bars) {
      xmin -= 0.5;
      xmax += 0.5;
    }
    if (xmax <= xmin) xmax = xmin + 1.0;
    if (ymax <= 0.0) ymax = 1.0;
    auto sx = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * plot_w; };
    auto sy = [&](double y) { return y0 + kTop + plot_h - y / ymax * plot_h; };

    out << "<text x=\"" << kWidth / 2 << "\" y=\"" << y0 + 20 << "\" text-anchor=\"middle\" font-size=\"14\">"
        << s.title << "</text>\n";
    out << "<line x1=\"" << kLeft << "\" y1=\"" << sy(0) << "\" x2=\"" << kLeft + plot_w << "\" y2=\"" << sy(0)
        << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << kLeft << "\" y1=\"" << sy(0) << "\" x2=\"" << kLeft << "\" y2=\"" << sy(ymax)
        << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
      const double v = ymax * i / 4.0;
      out << "<text x=\"" << kLeft - 6 << "\" y=\"" << sy(v) + 4 << "\" text-anchor=\"end\">"
          << text::format_double(std::round(v * 100.0) / 100.0) << "</text>\n";
    }
    for (std::size_t i = 0; i < s.xs.size(); ++i) {
      out << "<text x=\"" << sx(s.xs[i]) << "\" y=\"" << sy(0) + 16 << "\" text-anchor=\"middle\">"
          << text::format_double(s.xs[i]) << "</text>\n";
    }
    out << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << y0 + kPanelHeight - 12
        << "\" text-anchor=\"middle\">" << s.x_label << "</text>\n";
    out << "<text x=\"16\" y=\"" << y0 + kTop + plot_h / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << y0 + kTop + plot_h / 2 << ")\">" << s.y_label << "</text>\n";
    if (s.bars) {
      const double bar_w = std::max(1.0, plot_w / std::max<double>(1.0, xmax - xmin) * 0.8);
      for (std::size_t i = 0; i < s.xs.size(); ++i) {
        out << "<rect x=\"" << sx(s.xs[i]) - bar_w / 2 << "\" y=\"" << sy(s.ys[i]) << "\" width=\"" << bar_w
            << "\" height=\"" << sy(0) - sy(s.ys[i]) << "\" fill=\"steelblue\"/>\n";
      }
    } else {
      out << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"";
      for (std::size_t i = 0; i < s.xs.size(); ++i) out << (i ? " " : "") << sx(s.xs[i]) << ',' << sy(s.ys[i]);
      out << "\"/>\n";
      for (std::size_t i = 0; i < s.xs.size(); ++i) {
        out << "<circle cx=\"" << sx(s.xs[i]) << "\" cy=\"" << sy(s.ys[i]) << "\" r=\"3\" fill=\"steelblue\"/>\n";
      }
    }
  }
  out << "</svg>\n";
}

std::string x_label(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::fill:
      return "block filling (%)";
    case SweepAxis::dims:
      return "block capacity (cells)";
    case SweepAxis::t1_pct:
      return "T1 containers (%)";
  }
  return "";
}

}  // namespace

// Spec ------------------------------------------------------------------------

TypeMix TypeMix::reference() { return TypeMix{{{T1, 1.0}, {T2, 7.0}, {T3, 7.0}, {T4, 20.0}}}; }

TypeMix TypeMix::parse(std::string_view input) {
  TypeMix mix;
  for (auto part : text::split(input, ',')) {
    if (part.empty()) continue;
    const auto eq = part.find('=');
    if (eq == std::string_view::npos) throw ParseError(1, "mix entry '" + std::string(part) + "' lacks '='");
    std::string label(text::trim(part.substr(0, eq)));
    std::transform(label.begin(), label.end(), label.begin(), [](unsigned char c) { return std::toupper(c); });
    const auto type = ContainerType::parse(label);
    if (!type) throw ParseError(1, "unknown container type '" + label + "' in mix");
    if (*type == T5) throw ParseError(1, "T5 takes the remainder and cannot be set in the mix");
    mix.percent[*type] = text::parse_double(text::trim(part.substr(eq + 1)), 1);
  }
  mix.validate();
  return mix;
}

double TypeMix::get(ContainerType t) const {
  const auto it = percent.find(t);
  return it == percent.end() ? 0.0 : it->second;
}

void TypeMix::validate() const {
  double total = 0.0;
  for (const auto& [t, pct] : percent) {
    if (t == T5) throw DomainError("T5 takes the remainder and cannot be set in the mix");
    if (!(pct >= 0.0)) throw DomainError("mix percentage for " + t.label() + " must be >= 0");
    total += pct;
  }
  if (total > 100.0 + 1e-9) throw DomainError("mix percentages sum above 100");
}

ExperimentSpec ExperimentSpec::reference(Strategy s) {
  ExperimentSpec spec;
  spec.params = StrategyParams::defaults(s);
  return spec;
}

void ExperimentSpec::validate() const {
  dims.validate();
  if (!(fill >= 0.0) || fill > 1.0) throw DomainError("fill must lie in [0, 1]");
  mix.validate();
  params.validate();
  if (runs < 1) throw DomainError("runs must be >= 1");
}

std::map<ContainerType, std::size_t> type_counts(const ExperimentSpec& spec) {
  spec.validate();
  const double occupied = spec.fill * static_cast<double>(spec.dims.capacity());
  const std::size_t total = round_half_up(occupied);
  if (total > spec.dims.capacity()) throw CapacityError("requested more containers than cells");
  std::map<ContainerType, std::size_t> counts;
  std::size_t dangerous = 0;
  for (const auto& [t, pct] : spec.mix.percent) {
    counts[t] = round_half_up(occupied * pct / 100.0);
    dangerous += counts[t];
  }
  if (dangerous > total) throw CapacityError("type mix rounds to more containers than the fill allows");
  counts[T5] = total - dangerous;
  return counts;
}

YardConfiguration generate_instance(const ExperimentSpec& spec, std::size_t run_index) {
  const auto counts = type_counts(spec);
  std::vector<std::pair<ContainerId, ContainerType>> remaining;
  for (const auto& [t, n] : counts) {
    for (std::size_t i = 0; i < n; ++i) remaining.emplace_back(static_cast<ContainerId>(remaining.size()), t);
  }
  Rng rng(derive_seed(spec.master_seed, run_index, kInstanceStream));
  YardConfiguration cfg(spec.dims);
  while (!remaining.empty()) {
    const auto cells = cfg.placeable_cells();
    const Coordinate at = cells[rng.uniform_index(cells.size())];
    const std::size_t k = rng.uniform_index(remaining.size());
    cfg.place(remaining[k].first, remaining[k].second, at);
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(k));
  }
  return cfg;
}

StrategyParams run_params(const ExperimentSpec& spec, std::size_t run_index) {
  StrategyParams p = spec.params;
  p.seed = derive_seed(spec.master_seed, run_index, kStrategyStream);
  return p;
}

// Batches -----------------------------------------------------------------------

RunStatistics summarize(const std::vector<RunRow>& rows) {
  RunStatistics s;
  s.runs = rows.size();
  double moves = 0.0;
  double runtime = 0.0;
  for (const auto& r : rows) {
    ++s.status_counts[r.status];
    runtime += r.runtime_ms;
    if (r.status != RunStatus::safe) continue;
    if (s.successes == 0 || r.movements < s.min_movements) s.min_movements = r.movements;
    s.max_movements = std::max(s.max_movements, r.movements);
    moves += static_cast<double>(r.movements);
    ++s.successes;
  }
  if (s.runs > 0) {
    s.success_rate = 100.0 * static_cast<double>(s.successes) / static_cast<double>(s.runs);
    s.avg_runtime_ms = runtime / static_cast<double>(s.runs);
  }
  if (s.successes > 0) s.avg_movements = moves / static_cast<double>(s.successes);
  return s;
}

BatchResult run_batch(const ExperimentSpec& spec, const RuleMatrix& m, BatchOptions options) {
  spec.validate();
  BatchResult result;
  result.spec = spec;
  result.rows.reserve(spec.runs);
  for (std::size_t run = 0; run < spec.runs; ++run) {
    const YardConfiguration initial = generate_instance(spec, run);
    YardConfiguration cfg = initial;
    const auto started = std::chrono::steady_clock::now();
    const RunOutcome outcome = run_strategy(cfg, m, run_params(spec, run));
    const auto elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started);

    if (options.verify) {
      const auto report = oracle::verify_trace(
          initial, outcome.trace, m,
          oracle::ClaimedOutcome{outcome.movements, BlockFitness{outcome.final_worst, outcome.final_sum},
                                 outcome.status});
      if (!report.passed()) {
        throw VerificationError("run " + std::to_string(run) + " failed trace verification: " + report.summary());
      }
    }
    result.rows.push_back(
        {run, outcome.status, outcome.movements, outcome.final_worst, outcome.final_sum, elapsed.count()});
  }
  result.stats = summarize(result.rows);
  return result;
}

std::size_t AuditReport::missed() const {
  return static_cast<std::size_t>(std::count_if(cases.begin(), cases.end(), [](const AuditCase& c) { return c.safe_exists; }));
}

AuditReport audit_heuristic_failures(const ExperimentSpec& spec, const RuleMatrix& m,
                                     oracle::EnumerationBounds bounds) {
  spec.validate();
  AuditReport report;
  for (std::size_t run = 0; run < spec.runs; ++run) {
    YardConfiguration cfg = generate_instance(spec, run);
    std::vector<ContainerType> types;
    for (const auto& [id, rec] : cfg.containers()) types.push_back(rec.type);
    auto params = run_params(spec, run);
    params.strategy = Strategy::cabs;
    const auto outcome = run_cabs(cfg, m, params);
    ++report.instances;
    if (outcome.status != RunStatus::local_minimum && outcome.status != RunStatus::cycle_abort) continue;
    report.cases.push_back({run, outcome.status, oracle::exhaustive_safe_exists(spec.dims, types, m, bounds)});
  }
  return report;
}

std::string_view axis_name(SweepAxis a) {
  switch (a) {
    case SweepAxis::fill:
      return "fill";
    case SweepAxis::dims:
      return "dims";
    case SweepAxis::t1_pct:
      return "t1_pct";
  }
  return "unknown";
}

std::optional<SweepAxis> parse_axis(std::string_view name) {
  for (auto a : {SweepAxis::fill, SweepAxis::dims, SweepAxis::t1_pct}) {
    if (axis_name(a) == name) return a;
  }
  return std::nullopt;
}

ExperimentSpec apply_sweep_value(const ExperimentSpec& base, SweepAxis axis, const SweepValue& value) {
  ExperimentSpec spec = base;
  if (axis == SweepAxis::dims) {
    const auto* dims = std::get_if<YardDimensions>(&value);
    if (!dims) throw DomainError("dims sweep needs dimension values");
    spec.dims = *dims;
  } else {
    const auto* pct = std::get_if<double>(&value);
    if (!pct) throw DomainError(std::string(axis_name(axis)) + " sweep needs numeric values");
    if (axis == SweepAxis::fill) {
      spec.fill = *pct / 100.0;
    } else {
      spec.mix.percent[T1] = *pct;
    }
  }
  spec.validate();
  return spec;
}

SweepResult sweep(const ExperimentSpec& base, SweepAxis axis, const std::vector<SweepValue>& values,
                  const RuleMatrix& m, BatchOptions options) {
  if (values.empty()) throw DomainError("sweep needs at least one value");
  SweepResult result;
  result.axis = axis;
  for (const auto& v : values) {
    const ExperimentSpec spec = apply_sweep_value(base, axis, v);
    SweepPoint point;
    if (const auto* dims = std::get_if<YardDimensions>(&v)) {
      point.label = dims_label(*dims);
      point.x = static_cast<double>(dims->capacity());
    } else {
      point.label = text::format_double(std::get<double>(v));
      point.x = std::get<double>(v);
    }
    point.batch = run_batch(spec, m, options);
    result.points.push_back(std::move(point));
  }
  return result;
}

// Output ------------------------------------------------------------------------

std::optional<OutputFormat> parse_format(std::string_view name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "plotdata") return OutputFormat::plotdata;
  if (name == "svg") return OutputFormat::svg;
  return std::nullopt;
}

void write_runs_csv(std::ostream& out, const BatchResult& batch, bool comparison) {
  out << kRunCsvHeader << '\n';
  const auto& spec = batch.spec;
  for (const auto& r : batch.rows) {
    out << strategy_name(spec.params.strategy) << ',' << spec.master_seed << ',' << r.run << ',' << spec.dims.rows
        << ',' << spec.dims.slots << ',' << spec.dims.tiers << ',' << text::format_double(spec.fill);
    for (auto t : {T1, T2, T3, T4}) out << ',' << text::format_double(spec.mix.get(t));
    out << ',' << spec.params.weighting.name() << ',' << status_name(r.status) << ',' << r.movements << ','
        << r.final_worst << ',' << r.final_sum << ',' << runtime_text(r.runtime_ms, comparison) << '\n';
  }
}

void write_summary_csv(std::ostream& out, const BatchResult& batch, bool comparison) {
  out << kSummaryColumns << '\n';
  out << spec_columns(batch.spec, true) << ',' << stats_columns(batch.stats, comparison) << '\n';
}

void write_sweep_csv(std::ostream& out, const SweepResult& sweep, bool comparison) {
  out << "axis,label,x," << kSummaryColumns << '\n';
  for (const auto& p : sweep.points) {
    out << axis_name(sweep.axis) << ',' << p.label << ',' << text::format_double(p.x) << ','
        << spec_columns(p.batch.spec, true) << ',' << stats_columns(p.batch.stats, comparison) << '\n';
  }
}

void write_plotdata(std::ostream& out, const SweepResult& sweep) {
  out << "# " << axis_name(sweep.axis) << ": x success_rate avg_movements\n";
  for (const auto& p : sweep.points) {
    out << text::format_double(p.x) << ' ' << text::format_double(p.batch.stats.success_rate) << ' '
        << text::format_double(p.batch.stats.avg_movements) << '\n';
  }
}

void write_plotdata(std::ostream& out, const BatchResult& batch) {
  out << "# run movements\n";
  for (const auto& r : batch.rows) out << r.run << ' ' << r.movements << '\n';
}

void write_svg(std::ostream& out, const SweepResult& sweep) {
  Series moves{"Average movements (successful runs)", x_label(sweep.axis), "movements", {}, {}, false};
  Series success{"Success rate", x_label(sweep.axis), "success (%)", {}, {}, false};
  for (const auto& p : sweep.points) {
    moves.xs.push_back(p.x);
    moves.ys.push_back(p.batch.stats.avg_movements);
    success.xs.push_back(p.x);
    success.ys.push_back(p.batch.stats.success_rate);
  }
  render_svg(out, {moves, success});
}

void write_svg(std::ostream& out, const BatchResult& batch) {
  Series moves{"Movements per run", "run", "movements", {}, {}, true};
  for (const auto& r : batch.rows) {
    moves.xs.push_back(static_cast<double>(r.run));
    moves.ys.push_back(static_cast<double>(r.movements));
  }
  render_svg(out, {moves});
}

std::vector<std::filesystem::path> emit_outputs(const std::filesystem::path& dir, const BatchResult& batch,
                                                OutputFormat format, bool comparison) {
  if (batch.rows.empty()) throw DomainError("no runs to emit");
  std::vector<std::filesystem::path> paths;
  std::ofstream out;
  switch (format) {
    case OutputFormat::csv: {
      auto path = open_output(dir, "summary.csv", out);
      write_summary_csv(out, batch, comparison);
      close_output(out, path);
      paths.push_back(path);
      path = open_output(dir, "runs.csv", out);
      write_runs_csv(out, batch, comparison);
      close_output(out, path);
      paths.push_back(path);
      break;
    }
    case OutputFormat::plotdata: {
      const auto path = open_output(dir, "runs.dat", out);
      write_plotdata(out, batch);
      close_output(out, path);
      paths.push_back(path);
      break;
    }
    case OutputFormat::svg: {
      const auto path = open_output(dir, "runs.svg", out);
      write_svg(out, batch);
      close_output(out, path);
      paths.push_back(path);
      break;
    }
  }
  return paths;
}

std::vector<std::filesystem::path> emit_outputs(const std::filesystem::path& dir, const SweepResult& sweep,
                                                OutputFormat format, bool comparison) {
  if (sweep.points.empty()) throw DomainError("no sweep points to emit");
  const std::string stem = "sweep_" + std::string(axis_name(sweep.axis));
  std::vector<std::filesystem::path> paths;
  std::ofstream out;
  switch (format) {
    case OutputFormat::csv: {
      const auto path = open_output(dir, stem + ".csv", out);
      write_sweep_csv(out, sweep, comparison);
      close_output(out, path);
      paths.push_back(path);
      for (const auto& p : sweep.points) {
        const auto runs_path = open_output(dir, stem + "_" + p.label + "_runs.csv", out);
        write_runs_csv(out, p.batch, comparison);
        close_output(out, runs_path);
        paths.push_back(runs_path);
      }
      break;
    }
    case OutputFormat::plotdata: {
      const auto path = open_output(dir, stem + ".dat", out);
      write_plotdata(out, sweep);
      close_output(out, path);
      paths.push_back(path);
      break;
    }
    case OutputFormat::svg: {
      const auto path = open_output(dir, stem + ".svg", out);
      write_svg(out, sweep);
      close_output(out, path);
      paths.push_back(path);
      break;
    }
  }
  return paths;
}

SweepResult read_sweep_csv(std::string_view input) {
  const auto lines = text::split_lines(input);
  if (lines.empty()) throw ParseError(1, "empty sweep file");
  const auto header = text::split(text::trim(lines[0]), ',');
  auto column = [&](std::string_view name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw ParseError(1, "sweep CSV lacks column '" + std::string(name) + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t axis_col = column("axis");
  const std::size_t label_col = column("label");
  const std::size_t x_col = column("x");
  const std::size_t success_col = column("success_rate");
  const std::size_t avg_col = column("avg_movements");
  const std::size_t runs_col = column("runs");

  SweepResult result;
  for (std::size_t n = 1; n < lines.size(); ++n) {
    const auto line = text::trim(lines[n]);
    if (line.empty()) continue;
    const auto fields = text::split(line, ',');
    if (fields.size() != header.size()) throw ParseError(n + 1, "wrong number of fields");
    const auto axis = parse_axis(fields[axis_col]);
    if (!axis) throw ParseError(n + 1, "unknown axis '" + std::string(fields[axis_col]) + "'");
    result.axis = *axis;
    SweepPoint p;
    p.label = std::string(fields[label_col]);
    p.x = text::parse_double(fields[x_col], n + 1);
    p.batch.stats.success_rate = text::parse_double(fields[success_col], n + 1);
    p.batch.stats.avg_movements = text::parse_double(fields[avg_col], n + 1);
    p.batch.stats.runs = text::parse_uint(fields[runs_col], n + 1);
    result.points.push_back(std::move(p));
  }
  if (result.points.empty()) throw ParseError(lines.size(), "sweep CSV has no data rows");
  return result;
}

}  // namespace hazyard
