#pragma once

#include <compare>
#include <stdexcept>
#include <string>

namespace groveq {

// Sort of a morphism: source -> target, both >= 0.
struct Sort {
    int source = 0;
    int target = 0;

    friend auto operator<=>(const Sort&, const Sort&) = default;
};

inline std::string to_string(const Sort& s) {
    return std::to_string(s.source) + " -> " + std::to_string(s.target);
}

// Raised on malformed concrete syntax. Message carries line:column.
class parse_error : public std::runtime_error {
  public:
    parse_error(const std::string& msg, int line, int column)
        : std::runtime_error("parse error at " + std::to_string(line) + ":" +
                             std::to_string(column) + ": " + msg),
          line_(line),
          column_(column) {}

    int line() const { return line_; }
    int column() const { return column_; }

  private:
    int line_;
    int column_;
};

// Raised when sorts do not line up (composition, tupling, sum, dagger).
class sort_error : public std::runtime_error {
  public:
    explicit sort_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised when an operation's precondition on graph or grammar shape fails.
class domain_error : public std::runtime_error {
  public:
    explicit domain_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace groveq
