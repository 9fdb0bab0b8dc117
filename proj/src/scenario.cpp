/*
 * Copyright 2026 The coaxsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "coaxsim/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <set>
#include <sstream>

#include "coaxsim/error.hpp"
#include "coaxsim/topology.hpp"

namespace coaxsim {

std::string_view to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::kRun: return "run";
    case ExperimentKind::kSweepLoad: return "sweep-load";
    case ExperimentKind::kVariance: return "variance";
    case ExperimentKind::kCompare: return "compare";
    case ExperimentKind::kAsymCompare: return "asym-compare";
    case ExperimentKind::kPins: return "pins";
    case ExperimentKind::kPower: return "power";
  }
  return "?";
}

std::optional<ExperimentKind> parse_experiment_kind(std::string_view s) {
  for (auto k : {ExperimentKind::kRun, ExperimentKind::kSweepLoad, ExperimentKind::kVariance, ExperimentKind::kCompare,
                 ExperimentKind::kAsymCompare, ExperimentKind::kPins, ExperimentKind::kPower}) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

std::string_view to_string(ReportFormat f) { return f == ReportFormat::kCsv ? "csv" : "json"; }

std::optional<ReportFormat> parse_report_format(std::string_view s) {
  if (s == "csv") return ReportFormat::kCsv;
  if (s == "json") return ReportFormat::kJson;
  return std::nullopt;
}

namespace {

// ---------------------------------------------------------------------------
// Field lists, shared by the reader and the writer.

template <class V>
void fields(V& v, DramTiming& t) {
  v("data_rate_mts", t.data_rate_mts);
  v("subchannels", t.subchannels);
  v("ranks_per_subchannel", t.ranks_per_subchannel);
  v("banks_per_rank", t.banks_per_rank);
  v("t_rcd_ns", t.t_rcd_ns);
  v("t_cl_ns", t.t_cl_ns);
  v("t_rp_ns", t.t_rp_ns);
  v("t_ras_ns", t.t_ras_ns);
  v("burst_length", t.burst_length);
  v("bus_width_bits", t.bus_width_bits);
  v("read_write_turnaround_ns", t.read_write_turnaround_ns);
  v("write_read_turnaround_ns", t.write_read_turnaround_ns);
  v("controller_pipeline_ns", t.controller_pipeline_ns);
  v("t_wr_ns", t.t_wr_ns);
  v("t_ccd_ns", t.t_ccd_ns);
  v("t_rrd_ns", t.t_rrd_ns);
  v("t_faw_ns", t.t_faw_ns);
  v("row_bytes", t.row_bytes);
  v("fixed_service_ns", t.fixed_service_ns);
  v("refresh_interval_ns", t.refresh_interval_ns);
  v("refresh_cycle_ns", t.refresh_cycle_ns);
}

template <class V>
void fields(V& v, ControllerConfig& c) {
  v("read_queue_capacity", c.read_queue_capacity);
  v("write_queue_capacity", c.write_queue_capacity);
  v("write_high_watermark", c.write_high_watermark);
  v("write_low_watermark", c.write_low_watermark);
  v("starvation_cap", c.starvation_cap);
  v.enumeration("page_policy", c.page_policy, parse_page_policy, "open, open-adaptive, closed");
  v.enumeration("scheduler", c.scheduler, parse_scheduler_policy, "fr-fcfs, fcfs");
}

template <class V>
void fields(V& v, ClosedLoopCoreSpec& c) {
  v("cores", c.cores);
  v("issue_width", c.issue_width);
  v("rob_entries", c.rob_entries);
  v("mshrs", c.mshrs);
  v("clock_hz", c.clock_hz);
  v("miss_prob", c.miss_prob);
  v("write_prob", c.write_prob);
  v("dependency_prob", c.dependency_prob);
}

template <class V>
void fields(V& v, SyntheticLatencySpec& d) {
  std::string kind = d.kind == SyntheticLatencySpec::Kind::kFixed ? "fixed" : "bimodal";
  v("kind", kind);
  if (kind == "fixed") {
    double ns = d.low_ns;
    v("latency_ns", ns);
    d = SyntheticLatencySpec::fixed(ns);
  } else if (kind == "bimodal") {
    d.kind = SyntheticLatencySpec::Kind::kBimodal;
    v("low_ns", d.low_ns);
    v("high_ns", d.high_ns);
    v("p_low", d.p_low);
  } else {
    v.fail("kind", "expected one of: fixed, bimodal");
  }
}

template <class V>
void fields(V& v, InterfaceSpec& i) {
  v("name", i.name);
  v("pins", i.pins);
  v("bandwidth_gbps", i.bandwidth_gbps);
  v("per_direction", i.per_direction);
}

template <class V>
void fields(V& v, SystemCounts& c) {
  v("name", c.name);
  v("ddr_channels", c.ddr_channels);
  v("pcie_lanes", c.pcie_lanes);
  v("dimm_w", c.dimm_w);
  v("cpi", c.cpi);
}

template <class V>
void fields(V& v, Scenario& s) {
  v.optional_enumeration("experiment", s.experiment, parse_experiment_kind,
                         "run, sweep-load, variance, compare, asym-compare, pins, power");
  v("seed", s.seed);
  v("warmup_fraction", s.warmup_fraction);
  v("topology", s.topology);
  v("compare", s.compare);
  v("interleave_bytes", s.interleave_bytes);
  v.section("dram", [&](V& d) {
    fields(d, s.dram.timing);
    d.section("controller", [&](V& c) { fields(c, s.dram.controller); });
  });
  v.section("cxl", [&](V& c) {
    c("overhead_ns", s.cxl_overhead_ns);
    c("fifo_capacity", s.cxl_fifo_capacity);
    c("tx_read_priority", s.cxl_tx_read_priority);
  });
  v.section("traffic", [&](V& t) {
    t.enumeration("arrival", s.traffic.arrival, parse_arrival_process, "exponential, fixed, bursty");
    t("utilization", s.utilization);
    t("rate_gbps", s.rate_gbps);
    t.enumeration("pattern", s.traffic.pattern, parse_address_pattern, "uniform, sequential");
    t("stride_bytes", s.traffic.stride_bytes);
    t("read_fraction", s.traffic.read_fraction);
    t("requests", s.traffic.requests);
    t("address_space_bytes", s.traffic.address_space_bytes);
    t("cores", s.traffic.cores);
    t("burst_on_ns", s.traffic.burst_on_ns);
    t("burst_off_ns", s.traffic.burst_off_ns);
    t("burst_rate_multiplier", s.traffic.burst_rate_multiplier);
    t("trace", s.trace);
    t("until_ns", s.until_ns);
  });
  v.section("sweep", [&](V& w) { w("utilizations", s.sweep_utilizations); });
  v.section("asym", [&](V& a) {
    a("topology", s.asym_topology);
    a("load", s.asym_load);
  });
  v.section("variance", [&](V& a) {
    a("instructions", s.instructions);
    a.section("core", [&](V& c) { fields(c, s.core); });
    a.list("distributions", s.distributions);
  });
  v.section("pins", [&](V& p) { p.list("interfaces", s.interfaces); });
  v.section("power", [&](V& p) {
    p("package_w", s.power.package_w);
    p("ddr_controller_w", s.power.ddr_controller_w);
    p("ddr_phy_w", s.power.ddr_phy_w);
    p("pcie_lane_w", s.power.pcie_lane_w);
    p.list("designs", s.power_designs);
  });
  v.section("output", [&](V& o) {
    o("dir", s.out_dir);
    o.enumeration("format", s.format, parse_report_format, "csv, json");
    o("cdf", s.cdf);
  });
}

// ---------------------------------------------------------------------------
// Reader

std::string where(const std::string& source, const YAML::Mark& m) {
  std::ostringstream os;
  os << source;
  if (!m.is_null()) os << ':' << m.line + 1 << ':' << m.column + 1;
  return os.str();
}

class Reader {
 public:
  Reader(YAML::Node node, std::string path, const std::string& source)
      : node_(std::move(node)), path_(std::move(path)), source_(source) {
    if (node_ && !node_.IsNull() && !node_.IsMap()) throw error(node_.Mark(), path_, "expected a mapping");
  }

  template <class T>
  void operator()(const char* key, T& out) {
    if (const YAML::Node n = take(key)) read(n, field(key), out);
  }

  template <class E, class Parse>
  void enumeration(const char* key, E& out, Parse parse, const char* options) {
    if (const YAML::Node n = take(key)) {
      const auto v = parse(scalar(n, field(key)));
      if (!v) throw error(n.Mark(), field(key), std::string("expected one of: ") + options);
      out = *v;
    }
  }

  template <class E, class Parse>
  void optional_enumeration(const char* key, std::optional<E>& out, Parse parse, const char* options) {
    if (const YAML::Node n = take(key)) {
      if (n.IsNull()) return;
      E value{};
      enumeration_value(n, key, value, parse, options);
      out = value;
    }
  }

  void section(const char* key, const std::function<void(Reader&)>& fn) {
    const YAML::Node n = take(key);
    if (!n || n.IsNull()) return;
    Reader child(n, field(key), source_);
    fn(child);
    child.finish();
  }

  template <class T>
  void list(const char* key, std::vector<T>& out) {
    const YAML::Node n = take(key);
    if (!n) return;
    if (!n.IsSequence()) throw error(n.Mark(), field(key), "expected a list");
    out.clear();
    for (std::size_t i = 0; i < n.size(); ++i) {
      T item{};
      Reader child(n[i], field(key) + "[" + std::to_string(i) + "]", source_);
      fields(child, item);
      child.finish();
      out.push_back(item);
    }
  }

  [[noreturn]] void fail(const char* key, const std::string& what) {
    const YAML::Node n = node_[key];
    throw error(n ? n.Mark() : node_.Mark(), field(key), what);
  }

  void finish() const {
    if (!node_ || !node_.IsMap()) return;
    for (const auto& kv : node_) {
      const std::string key = kv.first.as<std::string>();
      if (!used_.count(key)) {
        throw error(kv.first.Mark(), path_.empty() ? key : path_ + "." + key, "unknown key");
      }
    }
  }

 private:
  template <class E, class Parse>
  void enumeration_value(const YAML::Node& n, const char* key, E& out, Parse parse, const char* options) {
    const auto v = parse(scalar(n, field(key)));
    if (!v) throw error(n.Mark(), field(key), std::string("expected one of: ") + options);
    out = *v;
  }

  YAML::Node take(const char* key) {
    used_.insert(key);
    if (!node_ || !node_.IsMap()) return YAML::Node();
    return node_[key];
  }

  std::string field(const char* key) const { return path_.empty() ? key : path_ + "." + key; }

  ConfigError error(const YAML::Mark& m, const std::string& field, const std::string& what) const {
    return ConfigError(where(source_, m) + ": " + field + ": " + what);
  }

  std::string scalar(const YAML::Node& n, const std::string& f) const {
    if (!n.IsScalar()) throw error(n.Mark(), f, "expected a scalar value");
    return n.Scalar();
  }

  void read(const YAML::Node& n, const std::string& f, double& out) const {
    const std::string s = scalar(n, f);
    double v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v)) {
      throw error(n.Mark(), f, "expected a number, got '" + s + "'");
    }
    out = v;
  }

  void read(const YAML::Node& n, const std::string& f, std::uint64_t& out) const {
    const std::string s = scalar(n, f);
    if (!s.empty() && s[0] == '-') throw error(n.Mark(), f, "out of range: must be >= 0, got " + s);
    std::uint64_t v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc::result_out_of_range) throw error(n.Mark(), f, "out of range: " + s);
    if (ec != std::errc() || p != s.data() + s.size()) {
      throw error(n.Mark(), f, "expected a non-negative integer, got '" + s + "'");
    }
    out = v;
  }

  void read(const YAML::Node& n, const std::string& f, std::uint32_t& out) const {
    std::uint64_t v = 0;
    read(n, f, v);
    if (v > std::numeric_limits<std::uint32_t>::max()) throw error(n.Mark(), f, "out of range: " + n.Scalar());
    out = static_cast<std::uint32_t>(v);
  }

  void read(const YAML::Node& n, const std::string& f, bool& out) const {
    const std::string s = scalar(n, f);
    if (s == "true") {
      out = true;
    } else if (s == "false") {
      out = false;
    } else {
      throw error(n.Mark(), f, "expected true or false, got '" + s + "'");
    }
  }

  void read(const YAML::Node& n, const std::string& f, std::string& out) const { out = scalar(n, f); }

  template <class T>
  void read(const YAML::Node& n, const std::string& f, std::vector<T>& out) const {
    if (!n.IsSequence()) throw error(n.Mark(), f, "expected a list");
    out.clear();
    for (std::size_t i = 0; i < n.size(); ++i) {
      T v{};
      read(n[i], f + "[" + std::to_string(i) + "]", v);
      out.push_back(v);
    }
  }

  YAML::Node node_;
  std::string path_;
  const std::string& source_;
  std::set<std::string> used_;
};

// ---------------------------------------------------------------------------
// Writer

std::string number(double v) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

class Writer {
 public:
  explicit Writer(YAML::Emitter& out) : out_(out) {}

  void operator()(const char* key, double v) { out_ << YAML::Key << key << YAML::Value << number(v); }
  void operator()(const char* key, std::uint64_t v) { out_ << YAML::Key << key << YAML::Value << v; }
  void operator()(const char* key, std::uint32_t v) { out_ << YAML::Key << key << YAML::Value << v; }
  void operator()(const char* key, bool v) { out_ << YAML::Key << key << YAML::Value << (v ? "true" : "false"); }
  void operator()(const char* key, const std::string& v) {
    out_ << YAML::Key << key << YAML::Value << YAML::DoubleQuoted << v;
  }
  void operator()(const char* key, const std::vector<double>& v) {
    out_ << YAML::Key << key << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (double d : v) out_ << number(d);
    out_ << YAML::EndSeq;
  }
  void operator()(const char* key, const std::vector<std::string>& v) {
    out_ << YAML::Key << key << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (const auto& s : v) out_ << YAML::DoubleQuoted << s;
    out_ << YAML::EndSeq;
  }

  template <class E, class Parse>
  void enumeration(const char* key, E v, Parse, const char*) {
    out_ << YAML::Key << key << YAML::Value << std::string(to_string(v));
  }

  template <class E, class Parse>
  void optional_enumeration(const char* key, const std::optional<E>& v, Parse p, const char* o) {
    if (v) enumeration(key, *v, p, o);
  }

  void section(const char* key, const std::function<void(Writer&)>& fn) {
    out_ << YAML::Key << key << YAML::Value << YAML::BeginMap;
    fn(*this);
    out_ << YAML::EndMap;
  }

  template <class T>
  void list(const char* key, std::vector<T>& items) {
    out_ << YAML::Key << key << YAML::Value << YAML::BeginSeq;
    for (T& item : items) {
      out_ << YAML::Flow << YAML::BeginMap;
      fields(*this, item);
      out_ << YAML::EndMap;
    }
    out_ << YAML::EndSeq;
  }

  [[noreturn]] void fail(const char* key, const std::string& what) {
    throw std::logic_error(std::string("cannot emit ") + key + ": " + what);
  }

 private:
  YAML::Emitter& out_;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

void require_preset(const std::string& name, const char* field) {
  for (const auto& p : preset_names()) {
    if (p == name) return;
  }
  std::string known;
  for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
  throw ConfigError(std::string(field) + ": unknown topology preset '" + name + "' (available: " + known + ")");
}

}  // namespace

void Scenario::validate() const {
  require(warmup_fraction >= 0 && warmup_fraction < 1, "warmup_fraction must be in [0, 1)");
  require(interleave_bytes >= kLineBytes && (interleave_bytes & (interleave_bytes - 1)) == 0,
          "interleave_bytes must be a power of two >= 64");
  require_preset(topology, "topology");
  require(compare.size() == 2, "compare must name exactly two topologies");
  for (const auto& t : compare) require_preset(t, "compare");
  require_preset(asym_topology, "asym.topology");
  dram.timing.validate();
  dram.controller.validate();
  require(cxl_overhead_ns >= 0, "cxl.overhead_ns must be >= 0");
  require(cxl_fifo_capacity >= 1, "cxl.fifo_capacity must be >= 1");

  OpenLoopSpec t = traffic;
  t.rate_bytes_per_s = 1.0;
  t.validate();
  require(utilization > 0 && utilization < 1, "traffic.utilization must be in (0, 1)");
  require(rate_gbps >= 0, "traffic.rate_gbps must be >= 0");
  require(until_ns >= 0, "traffic.until_ns must be >= 0");

  require(!sweep_utilizations.empty(), "sweep.utilizations must not be empty");
  for (double u : sweep_utilizations) require(u > 0 && u < 1, "sweep.utilizations values must be in (0, 1)");
  require(asym_load > 0, "asym.load must be positive");

  core.validate();
  require(instructions >= 1, "variance.instructions must be >= 1");
  require(!distributions.empty(), "variance.distributions must not be empty");
  for (const auto& d : distributions) d.validate(distributions.front().mean_ns());

  for (const auto& i : interfaces) require(i.pins > 0, "pins.interfaces: '" + i.name + "' needs pins > 0");
  for (const auto& d : power_designs) {
    require(d.cpi > 0, "power.designs: '" + d.name + "' needs cpi > 0");
    require(d.dimm_w >= 0, "power.designs: '" + d.name + "' needs dimm_w >= 0");
  }
  for (double w : {power.package_w, power.ddr_controller_w, power.ddr_phy_w, power.pcie_lane_w}) {
    require(w >= 0, "power component watts must be >= 0");
  }
  require(!out_dir.empty(), "output.dir must not be empty");
}

void Scenario::validate_runnable() const {
  if (!experiment) {
    throw ConfigError(
        "experiment kind required: set 'experiment' or pass a subcommand "
        "(run, sweep-load, variance, compare, asym-compare, pins, power)");
  }
  validate();
}

Scenario parse_scenario(const std::string& text, const std::string& source) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(where(source, e.mark) + ": " + e.msg);
  }
  Scenario s;
  if (!root || root.IsNull()) return s;
  try {
    Reader r(root, "", source);
    fields(r, s);
    r.finish();
  } catch (const YAML::Exception& e) {
    throw ConfigError(where(source, e.mark) + ": " + e.msg);
  }
  try {
    s.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(source + ": " + e.what());
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str(), path);
}

std::string emit_scenario(const Scenario& scenario) {
  Scenario copy = scenario;
  YAML::Emitter out;
  out << YAML::BeginMap;
  Writer w(out);
  fields(w, copy);
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace coaxsim
