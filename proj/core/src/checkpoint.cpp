#include "crossflow/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "crossflow/ddpg.hpp"

namespace crossflow {

namespace {

constexpr char kMagic[8] = {'C', 'K', 'P', 'T', '0', '0', '0', '1'};

void put_u32(std::ofstream& os, std::uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    os.write(reinterpret_cast<const char*>(b), 4);
}

void put_u64(std::ofstream& os, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    os.write(reinterpret_cast<const char*>(b), 8);
}

void put_f64(std::ofstream& os, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    put_u64(os, bits);
}

std::uint32_t get_u32(std::ifstream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
}

std::uint64_t get_u64(std::ifstream& is) {
    unsigned char b[8];
    is.read(reinterpret_cast<char*>(b), 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

double get_f64(std::ifstream& is) {
    const std::uint64_t bits = get_u64(is);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}

std::size_t shape_count(const std::vector<std::uint64_t>& shape) {
    std::size_t n = 1;
    for (std::uint64_t d : shape) n *= static_cast<std::size_t>(d);
    return n;
}

void copy_net_segments(const Net& net, const std::string& prefix, CheckpointMap& out) {
    for (const Net::Segment& seg : net.segments()) {
        CheckpointSegment cs;
        cs.shape = seg.shape;
        const std::size_t n = shape_count(seg.shape);
        cs.data.assign(net.params().begin() + static_cast<std::ptrdiff_t>(seg.offset),
                       net.params().begin() + static_cast<std::ptrdiff_t>(seg.offset + n));
        out.emplace(prefix + seg.name, std::move(cs));
    }
}

void restore_net_segments(Net& net, const std::string& prefix, const CheckpointMap& in) {
    for (const Net::Segment& seg : net.segments()) {
        const auto it = in.find(prefix + seg.name);
        if (it == in.end()) {
            throw std::runtime_error("checkpoint: missing segment " + prefix + seg.name);
        }
        const std::size_t n = shape_count(seg.shape);
        if (it->second.shape != seg.shape || it->second.data.size() != n) {
            throw std::runtime_error("checkpoint: shape mismatch for " + prefix + seg.name);
        }
        std::copy(it->second.data.begin(), it->second.data.end(),
                  net.params().begin() + static_cast<std::ptrdiff_t>(seg.offset));
    }
}

}  // namespace

void write_checkpoint(const std::string& path, const CheckpointMap& segments) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("checkpoint: cannot open for write: " + path);
    os.write(kMagic, 8);
    put_u32(os, static_cast<std::uint32_t>(segments.size()));
    for (const auto& [name, seg] : segments) {
        put_u32(os, static_cast<std::uint32_t>(name.size()));
        os.write(name.data(), static_cast<std::streamsize>(name.size()));
        put_u32(os, static_cast<std::uint32_t>(seg.shape.size()));
        for (std::uint64_t d : seg.shape) put_u64(os, d);
        if (seg.data.size() != shape_count(seg.shape)) {
            throw std::invalid_argument("checkpoint: segment data does not match shape: " + name);
        }
        for (double v : seg.data) put_f64(os, v);
    }
    os.flush();
    if (!os) throw std::runtime_error("checkpoint: write failed: " + path);
}

CheckpointMap read_checkpoint(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("checkpoint: cannot open for read: " + path);
    char magic[8];
    is.read(magic, 8);
    if (!is || std::memcmp(magic, kMagic, 8) != 0) {
        throw std::runtime_error("checkpoint: bad magic: " + path);
    }
    const std::uint32_t count = get_u32(is);
    CheckpointMap out;
    for (std::uint32_t i = 0; i < count; ++i) {
        const std::uint32_t name_len = get_u32(is);
        std::string name(name_len, '\0');
        is.read(name.data(), name_len);
        CheckpointSegment seg;
        const std::uint32_t ndim = get_u32(is);
        seg.shape.resize(ndim);
        for (std::uint32_t d = 0; d < ndim; ++d) seg.shape[d] = get_u64(is);
        const std::size_t n = shape_count(seg.shape);
        seg.data.resize(n);
        for (std::size_t k = 0; k < n; ++k) seg.data[k] = get_f64(is);
        if (!is) throw std::runtime_error("checkpoint: truncated file: " + path);
        out.emplace(std::move(name), std::move(seg));
    }
    return out;
}

CheckpointMap snapshot_agent(const DdpgAgent& agent) {
    CheckpointMap out;
    copy_net_segments(agent.actor(), "actor.", out);
    copy_net_segments(agent.critic(), "critic.", out);
    copy_net_segments(agent.target_actor(), "target_actor.", out);
    copy_net_segments(agent.target_critic(), "target_critic.", out);
    return out;
}

void restore_agent(DdpgAgent& agent, const CheckpointMap& segments) {
    restore_net_segments(agent.actor(), "actor.", segments);
    restore_net_segments(agent.critic(), "critic.", segments);
    restore_net_segments(agent.target_actor(), "target_actor.", segments);
    restore_net_segments(agent.target_critic(), "target_critic.", segments);
}

void save_agent(const std::string& path, const DdpgAgent& agent) {
    write_checkpoint(path, snapshot_agent(agent));
}

void load_agent(const std::string& path, DdpgAgent& agent) {
    restore_agent(agent, read_checkpoint(path));
}

}  // namespace crossflow
