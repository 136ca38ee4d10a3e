#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "gossipsim/schedule.hpp"

namespace gossipsim {

/// DGS1 text format:
///
///   DGS1 <n> <horizon> <mode>
///   R <t>            one block per round t = 1..horizon (R 0 only when
///   E <u> <v>        round-0 insertions exist); edges with u < v ascending,
///   I <node> <token> then insertions ascending by (node, token)
///
/// Every line ends with '\n'.
void write_dgs1(const AdversarySchedule& schedule, std::ostream& out);
std::string to_dgs1(const AdversarySchedule& schedule);

/// Parses and re-validates a DGS1 stream. Errors carry the 1-based line
/// number; a disconnected round is rejected with its round index.
AdversarySchedule read_dgs1(std::istream& in);
AdversarySchedule parse_dgs1(const std::string& text);

void save_schedule(const AdversarySchedule& schedule, const std::filesystem::path& path);
/// Loads a DGS1 file and, if `<path>.json` exists, its metadata sidecar.
AdversarySchedule load_schedule(const std::filesystem::path& path);

std::filesystem::path metadata_path(const std::filesystem::path& schedule_path);

}  // namespace gossipsim
