#pragma once

// Text formats for rules, block maps and words.
//
//   ca v1                      (or "map v1" for a block map between alphabets)
//   sides: one|two
//   states: <n>                (map v1: "states: <source> -> <target>")
//   factors: <f1> <f2> ...     (optional, product alphabets only)
//   neighborhood: <i> <j>
//   table:
//   <word> -> <state>          one line per neighborhood word
//
// Symbols are single characters 0-9a-z while the alphabet has at most 36
// states; larger alphabets write words as '.'-separated decimals.

#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>

#include "cadyn/core.hpp"

namespace cadyn {

std::string format_symbol(State s, std::uint32_t alphabet_size);
std::string format_word(std::span<const State> w, std::uint32_t alphabet_size);
/// Throws std::invalid_argument on symbols outside the alphabet.
Word parse_word(std::string_view text, std::uint32_t alphabet_size);

/// Canonical text. Writes "ca v1" when the alphabets coincide.
std::string format_map(const BlockMap& m);
std::string format_rule(const LocalRule& r);

BlockMap parse_map(std::string_view text);
/// Throws ParseError if the text describes a map between different alphabets.
LocalRule parse_rule(std::string_view text);

LocalRule load_rule(const std::string& path);
BlockMap load_map(const std::string& path);
void save_text(const std::string& path, const std::string& text);

}  // namespace cadyn
