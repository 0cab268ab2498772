#pragma once

#include <stdexcept>
#include <string>

namespace nilcyc {

// Exit-code classes used by the CLI: 2 parse, 3 precondition, 4 numeric.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, int line, int column);
    int line() const { return line_; }
    int column() const { return column_; }
    const std::string& bare_message() const { return bare_; }

private:
    std::string bare_;
    int line_;
    int column_;
};

class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace nilcyc
