#pragma once
// Minimal base64 encoder for embedding graph snapshots in trace lines.

#include <string>

namespace enumk {

inline std::string base64_encode(const std::string& in) {
    static const char table[] =
        "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
    std::string out;
    out.reserve((in.size() + 2) / 3 * 4);
    unsigned value = 0;
    int bits = 0;
    for (unsigned char c : in) {
        value = (value << 8) | c;
        bits += 8;
        while (bits >= 6) {
            out.push_back(table[(value >> (bits - 6)) & 63u]);
            bits -= 6;
        }
    }
    if (bits > 0) out.push_back(table[(value << (6 - bits)) & 63u]);
    while (out.size() % 4 != 0) out.push_back('=');
    return out;
}

}  // namespace enumk
