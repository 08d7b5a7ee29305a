#include "itervote/profile_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace itervote {

Profile read_profile(std::istream& in) {
  std::vector<Ranking> rankings;
  std::string line;
  int line_no = 0;
  int m = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;

    std::istringstream fields(line);
    std::vector<Alternative> order;
    std::string token;
    while (fields >> token) {
      std::size_t used = 0;
      int value = 0;
      try {
        value = std::stoi(token, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != token.size()) {
        throw ParseError(line_no, "not an integer: '" + token + "'");
      }
      order.push_back(value);
    }
    if (m == 0) {
      m = static_cast<int>(order.size());
    } else if (static_cast<int>(order.size()) != m) {
      throw ParseError(line_no, "expected " + std::to_string(m) +
                                    " alternatives, found " +
                                    std::to_string(order.size()));
    }
    try {
      rankings.emplace_back(std::move(order));
    } catch (const ValidationError& e) {
      throw ParseError(line_no, e.what());
    }
  }
  if (in.bad()) throw IoError("read failure");
  if (rankings.empty()) throw ParseError(line_no, "profile has no rankings");
  return Profile(rankings);
}

Profile read_profile_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  return read_profile(in);
}

void write_profile(std::ostream& out, const Profile& profile) {
  for (int j = 0; j < profile.num_agents(); ++j) {
    auto row = profile.order(j);
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out << ' ';
      out << row[i];
    }
    out << '\n';
  }
}

void write_profile_file(const std::string& path, const Profile& profile,
                        const std::string& header_comment) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  if (!header_comment.empty()) {
    std::istringstream lines(header_comment);
    std::string line;
    while (std::getline(lines, line)) out << "# " << line << '\n';
  }
  write_profile(out, profile);
  if (!out) throw IoError("write failure on '" + path + "'");
}

}  // namespace itervote
