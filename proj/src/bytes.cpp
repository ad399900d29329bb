#include <utxolab/bytes.hpp>

#include <openssl/evp.h>

namespace utxolab {
    std::string to_hex(std::span<const std::uint8_t> bytes)
    {
        static constexpr char digits[] = "0123456789abcdef";
        std::string out;
        out.reserve(bytes.size() * 2);
        for (const auto b: bytes) {
            out.push_back(digits[b >> 4]);
            out.push_back(digits[b & 0xF]);
        }
        return out;
    }

    static int hex_nibble(const char c)
    {
        if (c >= '0' && c <= '9')
            return c - '0';
        if (c >= 'a' && c <= 'f')
            return c - 'a' + 10;
        if (c >= 'A' && c <= 'F')
            return c - 'A' + 10;
        return -1;
    }

    byte_string from_hex(std::string_view hex)
    {
        if (hex.size() % 2 != 0)
            throw parse_error("hex string has odd length: " + std::string { hex });
        byte_string out;
        out.reserve(hex.size() / 2);
        for (std::size_t i = 0; i < hex.size(); i += 2) {
            const int hi = hex_nibble(hex[i]);
            const int lo = hex_nibble(hex[i + 1]);
            if (hi < 0 || lo < 0)
                throw parse_error("invalid hex digit in: " + std::string { hex });
            out.push_back(static_cast<std::uint8_t>((hi << 4) | lo));
        }
        return out;
    }

    digest32 digest32_from_hex(std::string_view hex)
    {
        const auto bytes = from_hex(hex);
        digest32 d {};
        if (bytes.size() != d.size())
            throw parse_error("expected a 32-byte hash, got " + std::to_string(bytes.size()) + " bytes");
        std::copy(bytes.begin(), bytes.end(), d.begin());
        return d;
    }

    digest32 sha256(std::span<const std::uint8_t> data)
    {
        digest32 out {};
        unsigned int len = 0;
        if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr) != 1 || len != out.size())
            throw error("SHA-256 computation failed");
        return out;
    }
}
