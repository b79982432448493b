#pragma once

#include <stdexcept>
#include <string>

namespace twosort {

// Single exception type for all user-input and contract failures.
// The CLI maps any Error to exit code 3 with the diagnostic on stderr.
struct Error : std::runtime_error {
  enum class Kind {
    Syntax,        // malformed s-expression / structure file
    Sort,          // H-term where S-term expected, or vice versa
    Arity,         // symbol applied to the wrong number of arguments
    Range,         // rational literal or table value outside [0,1]
    Totality,      // function table missing an entry
    UnknownSymbol, // symbol not declared in the signature
    Dimension,     // set dimension / tuple length mismatch
    Precondition,  // operation called outside its contract
    Input,         // file or CLI usage problem
  };

  Kind kind;
  int line = 0;  // 1-based; 0 when not tied to a source position
  int col = 0;

  Error(Kind k, const std::string& msg, int line_ = 0, int col_ = 0)
      : std::runtime_error(line_ > 0 ? std::to_string(line_) + ":" + std::to_string(col_) + ": " + msg
                                     : msg),
        kind(k),
        line(line_),
        col(col_) {}
};

}  // namespace twosort
