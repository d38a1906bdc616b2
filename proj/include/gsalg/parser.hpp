#pragma once

#include <string_view>
#include <vector>

#include "gsalg/element.hpp"

namespace gsalg {

/// Parses an expression over x,y (d = 2) or x1..xd with + - * ^, parentheses and
/// integer or a/b literals. Multiplication must be written; `line` offsets error positions.
Element parse_element(std::string_view text, unsigned d, Field field = Field::rational(),
                      unsigned degree_cap = kDefaultDegreeCap, std::size_t line = 1);

/// One expression per line; '#' starts a comment; blank lines are skipped.
std::vector<Element> parse_relations(std::string_view text, unsigned d, Field field = Field::rational(),
                                     unsigned degree_cap = kDefaultDegreeCap);

}  // namespace gsalg
