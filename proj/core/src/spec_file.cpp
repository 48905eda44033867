#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "gbnn/experiment.hpp"

namespace gbnn {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return out;
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = s.find(',');
    out.push_back(trim(s.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

[[noreturn]] void fail(std::size_t line, const std::string& msg) {
  throw SpecError("line " + std::to_string(line) + ": " + msg);
}

std::uint64_t parse_uint(std::string_view text, std::size_t line, std::string_view key) {
  std::uint64_t v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc{} || ptr != end)
    fail(line, "'" + std::string(key) + "' expects a non-negative integer, got '" + std::string(text) + "'");
  return v;
}

double parse_double(std::string_view text, std::size_t line, std::string_view key) {
  double v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc{} || ptr != end)
    fail(line, "'" + std::string(key) + "' expects a number, got '" + std::string(text) + "'");
  return v;
}

bool parse_bool(std::string_view text, std::size_t line, std::string_view key) {
  const auto s = lower(text);
  if (s == "true" || s == "yes" || s == "1") return true;
  if (s == "false" || s == "no" || s == "0") return false;
  fail(line, "'" + std::string(key) + "' expects true or false");
}

// Raw key/value pairs of one [config] block, with the line of each entry.
struct ConfigBlock {
  std::string name;
  std::size_t line = 0;
  std::map<std::string, std::pair<std::string, std::size_t>> entries;
};

const std::set<std::string> kGlobalKeys = {"chi",   "ell",  "c",    "erasures",       "message_counts",
                                           "trials", "seed", "include_oracle", "success", "ml_ambiguity"};
const std::set<std::string> kConfigKeys = {"dynamic", "activation", "alpha",    "beta",
                                           "mu",      "gamma",      "criteria", "max_iters"};

NamedConfig build_config(const ConfigBlock& block) {
  NamedConfig nc;
  nc.name = block.name;
  auto& cfg = nc.config;
  auto get = [&](const std::string& key) -> std::optional<std::pair<std::string, std::size_t>> {
    auto it = block.entries.find(key);
    if (it == block.entries.end()) return std::nullopt;
    return it->second;
  };

  std::vector<std::string> missing;
  if (!get("activation")) missing.push_back("activation");
  if (!get("criteria")) missing.push_back("criteria");
  if (!missing.empty()) {
    std::string msg = "config '" + block.name + "' is missing";
    for (const auto& k : missing) msg += " " + k;
    fail(block.line, msg);
  }

  if (auto d = get("dynamic")) {
    auto rule = parse_dynamic_rule(d->first);
    if (!rule) fail(d->second, "unknown dynamic rule '" + d->first + "' (expected sos, norm or som)");
    cfg.dynamic = *rule;
  }
  if (auto g = get("gamma")) cfg.gamma = parse_double(g->first, g->second, "gamma");

  const auto [activation, act_line] = *get("activation");
  const auto act = lower(activation);
  auto require_absent = [&](const char* key, const char* why) {
    if (auto e = get(key)) fail(e->second, std::string("'") + key + "' " + why);
  };
  if (act == "gwsta") {
    auto a = get("alpha");
    if (!a) fail(act_line, "gwsta needs 'alpha'");
    cfg.activation = GwstaParams{parse_uint(a->first, a->second, "alpha")};
    require_absent("beta", "only applies to glsko");
    require_absent("mu", "only applies to glsko");
  } else if (act == "gwta") {
    if (auto a = get("alpha"); a && parse_uint(a->first, a->second, "alpha") != 1)
      fail(a->second, "gwta fixes alpha = 1");
    cfg.activation = GwstaParams{1};
    require_absent("beta", "only applies to glsko");
    require_absent("mu", "only applies to glsko");
  } else if (act == "glsko") {
    GlskoParams p;
    if (auto b = get("beta")) p.beta = parse_uint(b->first, b->second, "beta");
    if (auto m = get("mu")) p.mu = parse_uint(m->first, m->second, "mu");
    require_absent("alpha", "only applies to gwsta");
    cfg.activation = p;
  } else {
    fail(act_line, "unknown activation '" + activation + "' (expected gwsta, gwta or glsko)");
  }

  const auto [criteria, crit_line] = *get("criteria");
  bool iter = false;
  for (auto item : split_list(criteria)) {
    const auto c = lower(item);
    if (c == "iter") iter = true;
    else if (c == "conv") cfg.criteria.conv = true;
    else if (c == "eqsc") cfg.criteria.eqsc = true;
    else if (c == "clq") cfg.criteria.clq = true;
    else fail(crit_line, "unknown stopping criterion '" + std::string(item) + "'");
  }
  auto max_iters = get("max_iters");
  if (iter && !max_iters) fail(crit_line, "criterion iter needs 'max_iters'");
  if (!iter && max_iters) fail(max_iters->second, "'max_iters' given but iter is not in criteria");
  if (iter) cfg.criteria.max_iters = parse_uint(max_iters->first, max_iters->second, "max_iters");

  return nc;
}

}  // namespace

ExperimentSpec parse_spec(std::istream& in) {
  ExperimentSpec spec;
  std::map<std::string, std::size_t> global_lines;
  std::vector<ConfigBlock> blocks;

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') fail(line_no, "unterminated section header");
      auto inner = trim(line.substr(1, line.size() - 2));
      if (!inner.starts_with("config")) fail(line_no, "unknown section '" + std::string(inner) + "'");
      auto name = trim(inner.substr(6));
      if (name.empty()) fail(line_no, "config block needs a name");
      if (inner.size() > 6 && !std::isspace(static_cast<unsigned char>(inner[6])))
        fail(line_no, "unknown section '" + std::string(inner) + "'");
      if (std::any_of(name.begin(), name.end(), [](char ch) {
            return std::isspace(static_cast<unsigned char>(ch)) || ch == ',' || ch == '/';
          }))
        fail(line_no, "config name '" + std::string(name) + "' may not contain spaces, commas or slashes");
      for (const auto& b : blocks)
        if (b.name == name) fail(line_no, "duplicate config name '" + std::string(name) + "'");
      blocks.push_back({std::string(name), line_no, {}});
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(line_no, "expected 'key = value'");
    const std::string key = lower(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (value.empty()) fail(line_no, "'" + key + "' has no value");

    if (!blocks.empty()) {
      if (!kConfigKeys.count(key)) fail(line_no, "unknown config key '" + key + "'");
      if (!blocks.back().entries.emplace(key, std::make_pair(value, line_no)).second)
        fail(line_no, "duplicate key '" + key + "'");
      continue;
    }

    if (!kGlobalKeys.count(key)) fail(line_no, "unknown key '" + key + "'");
    if (!global_lines.emplace(key, line_no).second) fail(line_no, "duplicate key '" + key + "'");
    if (key == "chi") spec.chi = parse_uint(value, line_no, key);
    else if (key == "ell") spec.ell = parse_uint(value, line_no, key);
    else if (key == "c") spec.c = parse_uint(value, line_no, key);
    else if (key == "erasures") spec.erasures = parse_uint(value, line_no, key);
    else if (key == "trials") spec.trials = parse_uint(value, line_no, key);
    else if (key == "seed") spec.seed = parse_uint(value, line_no, key);
    else if (key == "include_oracle") spec.include_oracle = parse_bool(value, line_no, key);
    else if (key == "message_counts") {
      for (auto item : split_list(value)) spec.message_counts.push_back(parse_uint(item, line_no, key));
    } else if (key == "success") {
      const auto v = lower(value);
      if (v == "exact") spec.success = SuccessMetric::Exact;
      else if (v == "lenient") spec.success = SuccessMetric::Lenient;
      else fail(line_no, "'success' expects exact or lenient");
    } else if (key == "ml_ambiguity") {
      const auto v = lower(value);
      if (v == "strict") spec.ml_ambiguity = AmbiguityPolicy::Strict;
      else if (v == "random") spec.ml_ambiguity = AmbiguityPolicy::RandomPick;
      else fail(line_no, "'ml_ambiguity' expects strict or random");
    }
  }

  std::vector<std::string> missing;
  for (const char* key : {"chi", "ell", "c", "erasures", "message_counts"})
    if (!global_lines.count(key)) missing.emplace_back(key);
  if (blocks.empty() && !spec.include_oracle) missing.emplace_back("[config <name>]");
  if (!missing.empty()) {
    std::string msg = "missing mandatory keys:";
    for (const auto& k : missing) msg += " " + k;
    throw SpecError(msg);
  }

  for (const auto& block : blocks) spec.configs.push_back(build_config(block));

  auto line_of = [&](const char* key) { return global_lines.count(key) ? global_lines.at(key) : std::size_t{0}; };
  if (spec.erasures >= spec.c)
    fail(line_of("erasures"), "erasures (" + std::to_string(spec.erasures) + ") must be below c (" +
                                  std::to_string(spec.c) + ")");
  for (std::size_t k = 1; k < spec.message_counts.size(); ++k)
    if (spec.message_counts[k] <= spec.message_counts[k - 1])
      fail(line_of("message_counts"), "message_counts must be strictly increasing");

  for (std::size_t k = 0; k < spec.configs.size(); ++k) {
    try {
      for (auto& w : validate_config(spec.configs[k].config))
        spec.warnings.push_back("config '" + spec.configs[k].name + "': " + w);
    } catch (const ConfigError& e) {
      fail(blocks[k].line, "config '" + spec.configs[k].name + "': " + e.what());
    }
  }
  try {
    validate_spec(spec);
  } catch (const SpecError& e) {
    throw SpecError(std::string("invalid spec: ") + e.what());
  }
  return spec;
}

ExperimentSpec parse_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open spec file " + path);
  return parse_spec(in);
}

}  // namespace gbnn
