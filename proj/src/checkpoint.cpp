#include "minipregel/checkpoint.hpp"

#include <cstring>

namespace minipregel {

namespace {

constexpr char kMagic[4] = {'P', 'G', 'L', 'C'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t x) {
    for (int i = 0; i < 4; ++i) {
        out.push_back(static_cast<std::uint8_t>(x >> (8 * i)));
    }
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t x) {
    for (int i = 0; i < 8; ++i) {
        out.push_back(static_cast<std::uint8_t>(x >> (8 * i)));
    }
}

void put_f64(std::vector<std::uint8_t>& out, double d) {
    std::uint64_t bits;
    static_assert(sizeof(bits) == sizeof(d));
    std::memcpy(&bits, &d, sizeof(bits));
    put_u64(out, bits);
}

void put_bitmap(std::vector<std::uint8_t>& out,
                const std::vector<std::uint8_t>& flags) {
    std::uint8_t acc = 0;
    for (std::size_t i = 0; i < flags.size(); ++i) {
        if (flags[i] != 0) {
            acc |= static_cast<std::uint8_t>(1u << (i % 8));
        }
        if (i % 8 == 7) {
            out.push_back(acc);
            acc = 0;
        }
    }
    if (flags.size() % 8 != 0) {
        out.push_back(acc);
    }
}

// Patches a section's length prefix once its payload is in place.
class SectionWriter {
public:
    explicit SectionWriter(std::vector<std::uint8_t>& out) : out_(out) {
        len_pos_ = out_.size();
        put_u64(out_, 0);
        body_pos_ = out_.size();
    }

    void close() {
        const std::uint64_t len = out_.size() - body_pos_;
        for (int i = 0; i < 8; ++i) {
            out_[len_pos_ + i] = static_cast<std::uint8_t>(len >> (8 * i));
        }
    }

private:
    std::vector<std::uint8_t>& out_;
    std::size_t len_pos_ = 0;
    std::size_t body_pos_ = 0;
};

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> data) : data_(data) {}

    std::size_t pos() const { return pos_; }
    std::size_t remaining() const { return data_.size() - pos_; }

    void need(std::size_t n) const {
        if (pos_ + n > data_.size()) {
            throw CheckpointError("checkpoint blob truncated");
        }
    }

    std::uint8_t u8() {
        need(1);
        return data_[pos_++];
    }

    std::uint32_t u32() {
        need(4);
        std::uint32_t x = 0;
        for (int i = 0; i < 4; ++i) {
            x |= static_cast<std::uint32_t>(data_[pos_++]) << (8 * i);
        }
        return x;
    }

    std::uint64_t u64() {
        need(8);
        std::uint64_t x = 0;
        for (int i = 0; i < 8; ++i) {
            x |= static_cast<std::uint64_t>(data_[pos_++]) << (8 * i);
        }
        return x;
    }

    double f64() {
        const std::uint64_t bits = u64();
        double d;
        std::memcpy(&d, &bits, sizeof(d));
        return d;
    }

    std::vector<std::uint8_t> bitmap(std::uint64_t flag_count) {
        const std::size_t bytes = (flag_count + 7) / 8;
        need(bytes);
        std::vector<std::uint8_t> flags(flag_count, 0);
        for (std::uint64_t i = 0; i < flag_count; ++i) {
            const std::uint8_t byte = data_[pos_ + i / 8];
            flags[i] = (byte >> (i % 8)) & 1u;
        }
        pos_ += bytes;
        return flags;
    }

private:
    std::span<const std::uint8_t> data_;
    std::size_t pos_ = 0;
};

// Reads one section's declared length and returns the position where the
// section must end.
std::size_t open_section(Reader& r) {
    const std::uint64_t len = r.u64();
    if (len > r.remaining()) {
        throw CheckpointError("checkpoint section length exceeds blob size");
    }
    return r.pos() + static_cast<std::size_t>(len);
}

void close_section(const Reader& r, std::size_t end, const char* name) {
    if (r.pos() != end) {
        throw CheckpointError(std::string("checkpoint section \"") + name +
                              "\" has inconsistent length");
    }
}

} // namespace

std::vector<std::uint8_t> make_checkpoint(const EngineState& state) {
    std::vector<std::uint8_t> out;
    out.insert(out.end(), kMagic, kMagic + 4);
    put_u32(out, kVersion);
    put_u64(out, state.superstep);
    put_u64(out, state.n_total);

    {
        SectionWriter section(out);
        for (double v : state.values) {
            put_f64(out, v);
        }
        section.close();
    }
    {
        SectionWriter section(out);
        put_bitmap(out, state.halted);
        section.close();
    }
    {
        SectionWriter section(out);
        put_u64(out, state.inbox.size());
        for (const Message& m : state.inbox) {
            put_u64(out, m.target);
            put_u64(out, m.sender);
            put_f64(out, m.payload);
        }
        section.close();
    }
    {
        SectionWriter section(out);
        put_u64(out, state.aggregators.size());
        for (const auto& [name, value] : state.aggregators) {
            put_u32(out, static_cast<std::uint32_t>(name.size()));
            out.insert(out.end(), name.begin(), name.end());
            put_f64(out, value);
        }
        section.close();
    }
    {
        SectionWriter section(out);
        put_bitmap(out, state.live);
        put_u64(out, state.edges.size());
        for (const Edge& e : state.edges) {
            put_u64(out, e.src);
            put_u64(out, e.dst);
            put_f64(out, e.weight);
        }
        section.close();
    }
    return out;
}

EngineState restore_checkpoint(std::span<const std::uint8_t> blob) {
    Reader r(blob);
    r.need(4);
    if (std::memcmp(blob.data(), kMagic, 4) != 0) {
        throw CheckpointError("checkpoint blob has bad magic");
    }
    // Skip the magic we just validated.
    for (int i = 0; i < 4; ++i) {
        r.u8();
    }
    if (r.u32() != kVersion) {
        throw CheckpointError("unsupported checkpoint version");
    }

    EngineState state;
    state.superstep = r.u64();
    state.n_total = r.u64();

    {
        const std::size_t end = open_section(r);
        state.values.reserve(state.n_total);
        for (std::uint64_t i = 0; i < state.n_total; ++i) {
            state.values.push_back(r.f64());
        }
        close_section(r, end, "values");
    }
    {
        const std::size_t end = open_section(r);
        state.halted = r.bitmap(state.n_total);
        close_section(r, end, "halted");
    }
    {
        const std::size_t end = open_section(r);
        const std::uint64_t count = r.u64();
        state.inbox.reserve(count);
        for (std::uint64_t i = 0; i < count; ++i) {
            Message m;
            m.target = static_cast<VertexId>(r.u64());
            m.sender = static_cast<VertexId>(r.u64());
            m.payload = r.f64();
            state.inbox.push_back(m);
        }
        close_section(r, end, "inbox");
    }
    {
        const std::size_t end = open_section(r);
        const std::uint64_t count = r.u64();
        for (std::uint64_t i = 0; i < count; ++i) {
            const std::uint32_t len = r.u32();
            r.need(len);
            std::string name;
            for (std::uint32_t k = 0; k < len; ++k) {
                name.push_back(static_cast<char>(r.u8()));
            }
            const double value = r.f64();
            state.aggregators.emplace_back(std::move(name), value);
        }
        close_section(r, end, "aggregators");
    }
    {
        const std::size_t end = open_section(r);
        state.live = r.bitmap(state.n_total);
        const std::uint64_t count = r.u64();
        state.edges.reserve(count);
        for (std::uint64_t i = 0; i < count; ++i) {
            Edge e;
            e.src = static_cast<VertexId>(r.u64());
            e.dst = static_cast<VertexId>(r.u64());
            e.weight = r.f64();
            state.edges.push_back(e);
        }
        close_section(r, end, "edges");
    }
    if (r.remaining() != 0) {
        throw CheckpointError("checkpoint blob has trailing bytes");
    }
    return state;
}

} // namespace minipregel
