#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <span>
#include <string>
#include <vector>

#include "mixphase/error.hpp"

namespace mixphase {

enum class WavErrorKind { Io, NotWave, Multichannel, UnsupportedCodec, Truncated };

class WavError : public Error {
public:
    WavError(WavErrorKind kind, const std::string& what) : Error(what), kind_(kind) {}
    WavErrorKind kind() const noexcept { return kind_; }

private:
    WavErrorKind kind_;
};

enum class SampleFormat { Pcm16, Float32 };

struct WavData {
    std::vector<double> samples;  // in [-1, 1]
    double fs = 0.0;
    SampleFormat format = SampleFormat::Pcm16;
};

namespace detail {

inline std::uint32_t le32(const unsigned char* p) {
    return std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 | std::uint32_t(p[2]) << 16 | std::uint32_t(p[3]) << 24;
}
inline std::uint16_t le16(const unsigned char* p) { return static_cast<std::uint16_t>(p[0] | p[1] << 8); }

inline void put32(std::vector<unsigned char>& b, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) b.push_back(static_cast<unsigned char>(v >> (8 * i)));
}
inline void put16(std::vector<unsigned char>& b, std::uint16_t v) {
    b.push_back(static_cast<unsigned char>(v));
    b.push_back(static_cast<unsigned char>(v >> 8));
}
inline void put_tag(std::vector<unsigned char>& b, const char* tag) { b.insert(b.end(), tag, tag + 4); }

}  // namespace detail

/// Parses a mono RIFF/WAVE image holding 16-bit PCM or 32-bit IEEE float
/// samples (plain or WAVE_FORMAT_EXTENSIBLE). PCM is scaled by 1/32768.
inline WavData parse_wav(std::span<const unsigned char> bytes) {
    using detail::le16;
    using detail::le32;
    if (bytes.size() < 12) throw WavError(WavErrorKind::Truncated, "wav: file shorter than RIFF header");
    if (std::memcmp(bytes.data(), "RIFF", 4) != 0 || std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
        throw WavError(WavErrorKind::NotWave, "wav: not a RIFF/WAVE file");

    bool have_fmt = false;
    std::uint16_t codec = 0, channels = 0, bits = 0, block_align = 0;
    std::uint32_t rate = 0;
    std::size_t pos = 12;
    while (pos + 8 <= bytes.size()) {
        const unsigned char* chunk = bytes.data() + pos;
        const std::uint32_t size = le32(chunk + 4);
        const std::size_t body = pos + 8;
        if (std::memcmp(chunk, "fmt ", 4) == 0) {
            if (size < 16 || body + size > bytes.size()) throw WavError(WavErrorKind::Truncated, "wav: truncated fmt chunk");
            const unsigned char* f = bytes.data() + body;
            codec = le16(f);
            channels = le16(f + 2);
            rate = le32(f + 4);
            block_align = le16(f + 12);
            bits = le16(f + 14);
            if (codec == 0xFFFE) {
                if (size < 40) throw WavError(WavErrorKind::Truncated, "wav: truncated extensible fmt chunk");
                codec = le16(f + 24);
            }
            have_fmt = true;
        } else if (std::memcmp(chunk, "data", 4) == 0) {
            if (!have_fmt) throw WavError(WavErrorKind::NotWave, "wav: data chunk before fmt chunk");
            if (channels != 1)
                throw WavError(WavErrorKind::Multichannel,
                               "wav: multichannel audio unsupported (" + std::to_string(channels) + " channels)");
            const bool pcm16 = codec == 1 && bits == 16;
            const bool f32 = codec == 3 && bits == 32;
            if (!pcm16 && !f32)
                throw WavError(WavErrorKind::UnsupportedCodec, "wav: unsupported codec " + std::to_string(codec) + " with " +
                                                                   std::to_string(bits) + " bits per sample");
            if (body + size > bytes.size() || size % block_align != 0)
                throw WavError(WavErrorKind::Truncated, "wav: truncated data chunk");
            WavData w;
            w.fs = static_cast<double>(rate);
            w.format = pcm16 ? SampleFormat::Pcm16 : SampleFormat::Float32;
            const std::size_t n = size / block_align;
            w.samples.resize(n);
            const unsigned char* d = bytes.data() + body;
            for (std::size_t i = 0; i < n; ++i) {
                if (pcm16) {
                    w.samples[i] = static_cast<std::int16_t>(le16(d + 2 * i)) / 32768.0;
                } else {
                    const std::uint32_t u = le32(d + 4 * i);
                    float v;
                    std::memcpy(&v, &u, sizeof v);
                    w.samples[i] = v;
                }
            }
            return w;
        }
        pos = body + size + (size & 1u);
    }
    throw WavError(WavErrorKind::Truncated, have_fmt ? "wav: missing data chunk" : "wav: missing fmt chunk");
}

inline WavData read_wav(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw WavError(WavErrorKind::Io, "wav: cannot open '" + path + "'");
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    return parse_wav(bytes);
}

inline std::vector<unsigned char> encode_wav(std::span<const double> samples, double fs, SampleFormat format) {
    using namespace detail;
    const std::uint16_t bits = format == SampleFormat::Pcm16 ? 16 : 32;
    const std::uint16_t align = bits / 8;
    const auto data_size = static_cast<std::uint32_t>(samples.size() * align);
    std::vector<unsigned char> b;
    b.reserve(44 + data_size);
    put_tag(b, "RIFF");
    put32(b, 36 + data_size);
    put_tag(b, "WAVE");
    put_tag(b, "fmt ");
    put32(b, 16);
    put16(b, format == SampleFormat::Pcm16 ? 1 : 3);
    put16(b, 1);
    put32(b, static_cast<std::uint32_t>(std::lround(fs)));
    put32(b, static_cast<std::uint32_t>(std::lround(fs)) * align);
    put16(b, align);
    put16(b, bits);
    put_tag(b, "data");
    put32(b, data_size);
    for (double v : samples) {
        if (format == SampleFormat::Pcm16) {
            const long q = std::clamp(std::lround(v * 32768.0), -32768L, 32767L);
            put16(b, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
        } else {
            const float f = static_cast<float>(v);
            std::uint32_t u;
            std::memcpy(&u, &f, sizeof u);
            put32(b, u);
        }
    }
    return b;
}

inline void write_wav(const std::string& path, std::span<const double> samples, double fs,
                      SampleFormat format = SampleFormat::Float32) {
    const auto bytes = encode_wav(samples, fs, format);
    std::ofstream os(path, std::ios::binary);
    if (!os) throw WavError(WavErrorKind::Io, "wav: cannot open '" + path + "' for writing");
    os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!os) throw WavError(WavErrorKind::Io, "wav: failed writing '" + path + "'");
}

}  // namespace mixphase
