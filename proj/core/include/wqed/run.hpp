#ifndef WQED_RUN_HPP
#define WQED_RUN_HPP

#include <string>
#include <vector>

#include "wqed/config.hpp"

namespace wqed {

// Combines per-ensemble binnings into one layout (ids follow input order).
BinnedLayout combine_layouts(const std::vector<EnsembleSpec>& specs, std::uint64_t m_bins,
                             std::uint64_t seed, const WarningSink& warn = {});

// Builds the CQED layout described by a config's [cqed] + [line] sections.
CqedLayout cqed_layout_from_config(const RunConfig& cfg, std::uint64_t seed,
                                   std::uint64_t m_per_ensemble);

struct RunOutput {
  std::vector<std::string> artifacts;  // files written
};

// Dispatches a parsed config: runs the experiment for each seed in the
// configured range (concurrently; one writer per file) and writes CSV +
// JSON sidecar artifacts. Throws wqed::Error on failure.
RunOutput run(const RunConfig& cfg);

// Parameter sweep over `axis`: "section.key=v1,v2,..." or
// "section.key=min:max:count[:log]". Writes one artifact set per point plus
// a summary CSV of scalar observables.
RunOutput sweep(const TomlDoc& base_doc, const std::string& axis,
                const std::vector<std::string>& overrides = {});

}  // namespace wqed

#endif
