#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include "capp/app/script.hpp"

namespace capp::app {

const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::Platform: return "platform";
    case Strategy::Random: return "random";
    case Strategy::BestFirst: return "best_first";
    case Strategy::MinLatency: return "min_latency";
  }
  return "?";
}

const char* to_string(Followup f) {
  return f == Followup::Default ? "default" : "fail";
}

namespace {

struct Line {
  int number;
  bool dash;           // item line ("- ...")
  std::string key;
  std::string value;   // after ':', possibly empty
};

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool valid_tag(const std::string& s) {
  if (s.empty()) return false;
  for (unsigned char c : s)
    if (!std::isalnum(c) && c != '_') return false;
  return true;
}

std::vector<Line> split_lines(const std::string& text) {
  std::vector<Line> out;
  std::istringstream is(text);
  std::string raw;
  int number = 0;
  while (std::getline(is, raw)) {
    ++number;
    if (raw.find('\t') != std::string::npos)
      throw ScriptError(number, "tabs are not allowed, use spaces");
    std::string s = trim(raw);
    if (s.empty() || s[0] == '#') continue;
    Line line;
    line.number = number;
    line.dash = s.rfind("- ", 0) == 0 || s == "-";
    if (line.dash) s = trim(s.substr(1));
    auto colon = s.find(':');
    if (colon == std::string::npos)
      throw ScriptError(number, "expected '<key>: <value>'");
    line.key = trim(s.substr(0, colon));
    line.value = trim(s.substr(colon + 1));
    out.push_back(std::move(line));
  }
  return out;
}

int parse_positive_int(const Line& line) {
  try {
    size_t idx = 0;
    int v = std::stoi(line.value, &idx);
    if (idx != line.value.size() || v <= 0) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw ScriptError(line.number, "expected a positive integer, got '" + line.value + "'");
  }
}

Invalidate parse_invalidate_param(const Line& line) {
  Invalidate inv;
  if (line.key == "capacity_used") {
    std::string v = line.value;
    if (v.empty() || v.back() != '%')
      throw ScriptError(line.number, "capacity_used expects a percentage like '80%'");
    v.pop_back();
    int percent;
    try {
      size_t idx = 0;
      percent = std::stoi(v, &idx);
      if (idx != v.size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw ScriptError(line.number, "bad percentage '" + line.value + "'");
    }
    if (percent < 0 || percent > 100)
      throw ScriptError(line.number, "percentage must be within 0..100");
    inv.kind = Invalidate::Kind::CapacityUsed;
    inv.percent = percent;
    return inv;
  }
  if (line.key == "max_concurrent_invocations") {
    inv.kind = Invalidate::Kind::MaxConcurrent;
    inv.max_concurrent = parse_positive_int(line);
    return inv;
  }
  if (line.key == "max_latency") {
    Rational t;
    try {
      t = Rational::from_string(line.value);
    } catch (const std::exception&) {
      throw ScriptError(line.number, "bad max_latency value '" + line.value + "'");
    }
    if (t.is_negative()) throw ScriptError(line.number, "max_latency must be nonnegative");
    inv.kind = Invalidate::Kind::MaxLatency;
    inv.threshold = t;
    return inv;
  }
  throw ScriptError(line.number, "unknown invalidate condition '" + line.key + "'");
}

class ScriptParser {
 public:
  explicit ScriptParser(std::vector<Line> lines) : lines_(std::move(lines)) {}

  CappScript parse() {
    for (const Line& line : lines_) handle(line);
    finish_policy();
    return std::move(script_);
  }

 private:
  void handle(const Line& line) {
    if (pending_invalidate_) {
      block().invalidate = parse_invalidate_param(line);
      pending_invalidate_ = false;
      return;
    }
    if (line.dash && line.key == "workers") {
      require_policy(line, "workers");
      if (!line.value.empty()) {
        if (line.value != "*")
          throw ScriptError(line.number, "inline workers value must be '*'");
        blocks_.push_back({true, {}, Strategy::Platform, {}});
      } else {
        blocks_.push_back({false, {}, Strategy::Platform, {}});
      }
      open_worker_list_ = line.value.empty();
      return;
    }
    if (line.dash && line.key == "wrk") {
      require_policy(line, "wrk");
      if (blocks_.empty() || !open_worker_list_)
        throw ScriptError(line.number, "'- wrk:' outside a workers list");
      if (line.value.empty()) throw ScriptError(line.number, "missing worker label");
      block().workers.push_back(line.value);
      return;
    }
    if (line.dash) {
      // Any other dash item starts a policy.
      if (!valid_tag(line.key))
        throw ScriptError(line.number, "invalid policy tag '" + line.key + "'");
      if (!line.value.empty())
        throw ScriptError(line.number, "unexpected value after policy tag");
      finish_policy();
      tag_ = line.key;
      tag_line_ = line.number;
      have_policy_ = true;
      return;
    }
    if (line.key == "strategy") {
      require_block(line);
      if (line.value == "platform") block().strategy = Strategy::Platform;
      else if (line.value == "random") block().strategy = Strategy::Random;
      else if (line.value == "best_first") block().strategy = Strategy::BestFirst;
      else if (line.value == "min_latency") block().strategy = Strategy::MinLatency;
      else throw ScriptError(line.number, "unknown strategy '" + line.value + "'");
      open_worker_list_ = false;
      return;
    }
    if (line.key == "invalidate") {
      require_block(line);
      open_worker_list_ = false;
      if (line.value.empty()) {
        pending_invalidate_ = true;
      } else if (line.value == "overload") {
        block().invalidate = {Invalidate::Kind::Overload, 0, 0, Rational(0)};
      } else if (line.value == "none") {
        block().invalidate = {Invalidate::Kind::None, 0, 0, Rational(0)};
      } else {
        throw ScriptError(line.number, "unknown invalidate condition '" + line.value + "'");
      }
      return;
    }
    if (line.key == "followup") {
      require_policy(line, "followup");
      if (line.value == "default") followup_ = Followup::Default;
      else if (line.value == "fail") followup_ = Followup::Fail;
      else throw ScriptError(line.number, "followup must be 'default' or 'fail'");
      followup_explicit_ = true;
      open_worker_list_ = false;
      return;
    }
    throw ScriptError(line.number, "unexpected key '" + line.key + "'");
  }

  Block& block() { return blocks_.back(); }

  void require_policy(const Line& line, const char* what) {
    if (!have_policy_)
      throw ScriptError(line.number, std::string("'") + what + "' outside a policy");
  }
  void require_block(const Line& line) {
    require_policy(line, line.key.c_str());
    if (blocks_.empty())
      throw ScriptError(line.number, "'" + line.key + "' before any workers block");
  }

  void finish_policy() {
    if (!have_policy_) return;
    if (pending_invalidate_)
      throw ScriptError(tag_line_, "invalidate condition is missing its parameter");
    if (blocks_.empty())
      throw ScriptError(tag_line_, "policy '" + tag_ + "' has no workers block");
    for (const Block& b : blocks_)
      if (!b.all_workers && b.workers.empty())
        throw ScriptError(tag_line_, "a workers block of '" + tag_ + "' lists no workers");
    if (script_.find(tag_))
      throw ScriptError(tag_line_, "duplicate policy tag '" + tag_ + "'");
    script_.policies.emplace_back(tag_,
                                  Policy{std::move(blocks_), followup_, followup_explicit_});
    blocks_.clear();
    followup_ = Followup::Default;
    followup_explicit_ = false;
    have_policy_ = false;
  }

  std::vector<Line> lines_;
  CappScript script_;
  std::vector<Block> blocks_;
  Followup followup_ = Followup::Default;
  bool followup_explicit_ = false;
  std::string tag_;
  int tag_line_ = 0;
  bool have_policy_ = false;
  bool open_worker_list_ = false;
  bool pending_invalidate_ = false;
};

}  // namespace

CappScript parse_capp(const std::string& text) {
  return ScriptParser(split_lines(text)).parse();
}

std::string serialize(const CappScript& script) {
  std::ostringstream os;
  for (const auto& [tag, policy] : script.policies) {
    os << "- " << tag << ":\n";
    for (const Block& b : policy.blocks) {
      if (b.all_workers) {
        os << "  - workers: *\n";
      } else {
        os << "  - workers:\n";
        for (const auto& w : b.workers) os << "    - wrk: " << w << "\n";
      }
      os << "    strategy: " << to_string(b.strategy) << "\n";
      switch (b.invalidate.kind) {
        case Invalidate::Kind::Overload:
          os << "    invalidate: overload\n";
          break;
        case Invalidate::Kind::None:
          os << "    invalidate: none\n";
          break;
        case Invalidate::Kind::CapacityUsed:
          os << "    invalidate:\n      capacity_used: " << b.invalidate.percent << "%\n";
          break;
        case Invalidate::Kind::MaxConcurrent:
          os << "    invalidate:\n      max_concurrent_invocations: "
             << b.invalidate.max_concurrent << "\n";
          break;
        case Invalidate::Kind::MaxLatency:
          os << "    invalidate:\n      max_latency: "
             << b.invalidate.threshold.to_decimal_string() << "\n";
          break;
      }
    }
    os << "  followup: " << to_string(policy.followup) << "\n";
  }
  return os.str();
}

}  // namespace capp::app
