#ifndef NEGDETECT_ERROR_H_
#define NEGDETECT_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace negdetect {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised while loading resource files or validating configuration.
// `line` is 1-based, 0 when the problem is not tied to a line.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what, std::size_t line = 0)
      : Error(what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Raised by the CoNLL-U reader (line set) and the pattern parser
// (offset set, in code points).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t offset)
      : Error(what), line_(line), offset_(offset) {}
  std::size_t line() const { return line_; }
  std::size_t offset() const { return offset_; }

 private:
  std::size_t line_;
  std::size_t offset_;
};

}  // namespace negdetect

#endif  // NEGDETECT_ERROR_H_
