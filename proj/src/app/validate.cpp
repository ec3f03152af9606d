#include <algorithm>
#include <set>

#include "capp/app/script.hpp"

namespace capp::app {

std::vector<Diagnostic> validate(
    const CappScript& script, const std::vector<std::string>& fleet_labels,
    const std::vector<std::pair<std::string, std::string>>& registry) {
  std::vector<Diagnostic> diags;
  std::set<std::string> fleet(fleet_labels.begin(), fleet_labels.end());
  const bool has_default = script.find("default") != nullptr;

  for (const auto& [tag, policy] : script.policies) {
    for (const Block& b : policy.blocks)
      for (const auto& w : b.workers)
        if (!fleet.count(w))
          diags.push_back({Severity::Error, 0, 0,
                           "policy '" + tag + "' references unknown worker " + w});
    if (policy.followup == Followup::Default && policy.followup_explicit &&
        tag != "default" && !has_default)
      diags.push_back({Severity::Error, 0, 0,
                       "policy '" + tag + "' falls back to 'default' but no default policy exists"});
    if (tag == "default") continue;
    bool used = std::any_of(registry.begin(), registry.end(),
                            [&](const auto& fn) { return fn.second == tag; });
    if (!used)
      diags.push_back({Severity::Warning, 0, 0,
                       "policy '" + tag + "' matches no registered function"});
  }

  for (const auto& [fn, tag] : registry) {
    const std::string effective = tag.empty() ? "default" : tag;
    if (!script.find(effective) && !has_default)
      diags.push_back({Severity::Error, 0, 0,
                       "no policy for tag " + effective + " (function " + fn + ")"});
  }
  return diags;
}

}  // namespace capp::app
