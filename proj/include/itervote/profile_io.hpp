#pragma once

// Profile text format: one ranking per line as m whitespace-separated 1-based
// alternatives, most preferred first. Blank lines and lines starting with '#'
// are ignored. The number of ranking lines is n.

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "itervote/core.hpp"

namespace itervote {

// Malformed profile text. `line()` is the 1-based source line.
class ParseError : public ValidationError {
 public:
  ParseError(int line, const std::string& what)
      : ValidationError("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Profile read_profile(std::istream& in);
Profile read_profile_file(const std::string& path);

void write_profile(std::ostream& out, const Profile& profile);
void write_profile_file(const std::string& path, const Profile& profile,
                        const std::string& header_comment = "");

}  // namespace itervote
