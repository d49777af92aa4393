#include "eitrec/text_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace eitrec {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string hash_hex(std::uint64_t h) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

TokenReader::TokenReader(std::istream& in) : in_(in) {}

void TokenReader::refill() {
    pending_.clear();
    cursor_ = 0;
    std::string line;
    while (pending_.empty() && std::getline(in_, line)) {
        if (!line.empty() && line[0] == '#') continue;
        std::istringstream ls(line);
        std::string tok;
        while (ls >> tok) {
            if (tok[0] == '#') break;  // trailing comment
            pending_.push_back(tok);
        }
    }
}

std::string TokenReader::next() {
    if (cursor_ >= pending_.size()) refill();
    if (cursor_ >= pending_.size()) throw std::runtime_error("unexpected end of input");
    return pending_[cursor_++];
}

bool TokenReader::at_end() {
    if (cursor_ >= pending_.size()) refill();
    return cursor_ >= pending_.size();
}

double TokenReader::next_double() {
    const std::string tok = next();
    try {
        std::size_t used = 0;
        const double v = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("expected a number, got '" + tok + "'");
    }
}

long long TokenReader::next_int() {
    const std::string tok = next();
    try {
        std::size_t used = 0;
        const long long v = std::stoll(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("expected an integer, got '" + tok + "'");
    }
}

void TokenReader::expect(const std::string& expected) {
    const std::string tok = next();
    if (tok != expected)
        throw std::runtime_error("expected token '" + expected + "', got '" + tok + "'");
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace eitrec
