#ifndef WFT_ERRORS_HPP_
#define WFT_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace wft {

// Argument outside the set where an operation is defined.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A structural invariant was broken. Signals a bug, never bad input.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& field, int line, const std::string& what)
      : std::runtime_error(Format(field, line, what)), field_(field), line_(line) {}

  const std::string& field() const { return field_; }
  int line() const { return line_; }

 private:
  static std::string Format(const std::string& field, int line, const std::string& what) {
    std::string msg;
    if (line > 0) msg += "line " + std::to_string(line) + ": ";
    if (!field.empty()) msg += "field '" + field + "': ";
    return msg + what;
  }

  std::string field_;
  int line_;
};

}  // namespace wft

#endif  // WFT_ERRORS_HPP_
