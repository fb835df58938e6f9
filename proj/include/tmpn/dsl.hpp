#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tmpn/petri.hpp"
#include "tmpn/psystem.hpp"

namespace tmpn {

// half-open byte range [begin, end) with the 1-based line/column of begin
struct source_span {
  std::size_t begin = 0;
  std::size_t end = 0;
  int line = 1;
  int column = 1;
};

struct parse_error : error {
  source_span span;
  std::vector<std::string> expected;  // token descriptions, at least one
  std::string found;

  parse_error(const std::string& message, source_span sp, std::vector<std::string> exp,
              std::string got);
};

enum class model_kind { psystem, petri };
using parsed_model = std::variant<timed_psystem, timed_petri_net>;

// which grammar the text starts with; throws parse_error otherwise
model_kind sniff_kind(std::string_view text);

// Parsing is total: any byte sequence either yields a finalized model or
// throws parse_error / validation_error.
timed_psystem parse_psystem(std::string_view text);
timed_petri_net parse_petri(std::string_view text);
parsed_model parse_model(std::string_view text);

// Canonical text; parse(print(m)) == m for every finalized model.
std::string print_psystem(const timed_psystem& sys);
std::string print_petri(const timed_petri_net& net);
std::string print_model(const parsed_model& m);

}  // namespace tmpn
