#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace crossflow {

class DdpgAgent;

/// One named tensor inside a checkpoint file.
struct CheckpointSegment {
    std::vector<std::uint64_t> shape;
    std::vector<double> data;
};

using CheckpointMap = std::map<std::string, CheckpointSegment>;

/// Binary little-endian container: magic "CKPT0001", u32 segment count,
/// then per segment u32 name length, name bytes, u32 ndim, u64 dims,
/// row-major f64 payload. Round trips bit-exactly.
void write_checkpoint(const std::string& path, const CheckpointMap& segments);
CheckpointMap read_checkpoint(const std::string& path);

/// Serializes the eval and target networks of one agent.
CheckpointMap snapshot_agent(const DdpgAgent& agent);
void restore_agent(DdpgAgent& agent, const CheckpointMap& segments);

void save_agent(const std::string& path, const DdpgAgent& agent);
void load_agent(const std::string& path, DdpgAgent& agent);

}  // namespace crossflow
