#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace eitrec {

/// Formats a double with enough digits to round-trip exactly through text.
std::string format_double(double v);

std::uint64_t fnv1a64(const std::string& data);
std::string hash_hex(std::uint64_t h);

/// Whitespace token stream over a text table. Lines starting with '#' are
/// comments and are skipped entirely.
class TokenReader {
public:
    explicit TokenReader(std::istream& in);

    std::string next();  // throws std::runtime_error at end of input
    bool at_end();

    double next_double();
    long long next_int();

    /// Consumes a token and checks it equals `expected` (format anchors).
    void expect(const std::string& expected);

private:
    void refill();

    std::istream& in_;
    std::vector<std::string> pending_;
    std::size_t cursor_ = 0;
};

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace eitrec
