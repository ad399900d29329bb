#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace utxolab {
    using byte_string = std::vector<std::uint8_t>;
    using digest32 = std::array<std::uint8_t, 32>;

    struct error : std::runtime_error {
        using std::runtime_error::runtime_error;
    };

    // a caller broke an operation's precondition
    struct precondition_error : error {
        using error::error;
    };

    // applyTx would overwrite a live UTxO entry: hash collision or replay
    struct key_collision_error : error {
        using error::error;
    };

    struct unsupported_error : error {
        using error::error;
    };

    struct parse_error : error {
        using error::error;
    };

    // an internal invariant that valid inputs can never break
    struct invariant_error : std::logic_error {
        using std::logic_error::logic_error;
    };

    std::string to_hex(std::span<const std::uint8_t> bytes);
    byte_string from_hex(std::string_view hex);
    digest32 digest32_from_hex(std::string_view hex);

    digest32 sha256(std::span<const std::uint8_t> data);

    inline std::span<const std::uint8_t> as_bytes(std::string_view s)
    {
        return { reinterpret_cast<const std::uint8_t *>(s.data()), s.size() };
    }

    // Append-only writer for the canonical binary encoding (see docs/serialization.md).
    // Naturals are 8-byte big-endian, variable-length strings carry an 8-byte length prefix.
    class canonical_writer {
    public:
        canonical_writer &natural(std::uint64_t v)
        {
            for (int shift = 56; shift >= 0; shift -= 8)
                _buf.push_back(static_cast<std::uint8_t>(v >> shift));
            return *this;
        }

        canonical_writer &var_bytes(std::span<const std::uint8_t> b)
        {
            natural(b.size());
            return raw(b);
        }

        canonical_writer &var_bytes(std::string_view s)
        {
            return var_bytes(as_bytes(s));
        }

        canonical_writer &raw(std::span<const std::uint8_t> b)
        {
            _buf.insert(_buf.end(), b.begin(), b.end());
            return *this;
        }

        canonical_writer &tag(std::uint8_t t)
        {
            _buf.push_back(t);
            return *this;
        }

        const byte_string &bytes() const { return _buf; }
        byte_string take() { return std::move(_buf); }
    private:
        byte_string _buf {};
    };
}
