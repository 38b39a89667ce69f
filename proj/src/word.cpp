#include "parqr/word.hpp"

#include <cctype>

namespace parqr {

std::string to_hex(Word x) {
    const unsigned digits = (x.width() + 3) / 4;
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out = "0x";
    for (unsigned i = digits; i-- > 0;)
        out += kHex[(x.value() >> (4 * i)) & 0xF];
    return out;
}

Word word_from_hex(std::string_view text, unsigned width) {
    std::string_view body = text;
    if (body.size() >= 2 && body[0] == '0' && (body[1] == 'x' || body[1] == 'X'))
        body.remove_prefix(2);
    if (body.empty())
        throw std::invalid_argument("hex word: empty string");
    std::uint64_t value = 0;
    unsigned bits = 0;
    for (char ch : body) {
        const unsigned char c = static_cast<unsigned char>(ch);
        unsigned nibble;
        if (std::isdigit(c)) nibble = c - '0';
        else if (c >= 'a' && c <= 'f') nibble = c - 'a' + 10;
        else if (c >= 'A' && c <= 'F') nibble = c - 'A' + 10;
        else
            throw std::invalid_argument(std::string("hex word: bad character '") + ch + "'");
        if (bits + 4 > 64 && (value >> 60) != 0)
            throw std::invalid_argument("hex word: value exceeds 64 bits");
        value = (value << 4) | nibble;
        bits += 4;
    }
    if (width < 64 && (value >> width) != 0)
        throw std::invalid_argument("hex word: value " + std::string(text) +
                                    " does not fit in " + std::to_string(width) + " bits");
    return Word(value, width);
}

}  // namespace parqr
