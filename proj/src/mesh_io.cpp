#include "wcl/mesh_io.hpp"

#include <istream>
#include <ostream>
#include <sstream>

#include "wcl/errors.hpp"
#include "wcl/report.hpp"

namespace wcl {

namespace {

template <class T>
T take(std::istringstream& in, const char* what, int line) {
  T x{};
  if (!(in >> x)) throw DomainError("mesh line " + std::to_string(line) + ": missing " + what);
  return x;
}

std::istringstream next_line(std::istream& is, int& line) {
  std::string s;
  while (std::getline(is, s)) {
    ++line;
    if (!s.empty() && s[0] != '#') return std::istringstream(s);
  }
  throw DomainError("mesh: unexpected end of input after line " + std::to_string(line));
}

}  // namespace

void write_mesh(std::ostream& os, const MeshedLagrangian& m) {
  m.validate();
  os << "# wcl-mesh 1\n";
  os << m.n << ' ' << m.Na << ' ' << m.Nb << ' ' << m.Nv << '\n';
  os << format_double(m.a0) << ' ' << format_double(m.a1) << ' ' << format_double(m.b0) << ' '
     << format_double(m.b1) << ' ' << format_double(m.v0) << ' ' << format_double(m.v1) << '\n';
  os << "# i j k a b v";
  for (int i = 1; i <= m.n; ++i) os << " x_" << i;
  for (int i = 1; i <= m.n; ++i) os << " y_" << i;
  os << " z v_image flags\n";
  for (int k = 0; k < m.Nv; ++k) {
    for (int j = 0; j < m.Nb; ++j) {
      for (int i = 0; i < m.Na; ++i) {
        const int q = m.index(i, j, k);
        os << i << ' ' << j << ' ' << k << ' ' << format_double(m.a(i)) << ' ' << format_double(m.b(j)) << ' '
           << format_double(m.v(k));
        for (int c = 0; c < m.nodes[q].size(); ++c) os << ' ' << format_double(m.nodes[q](c));
        os << ' ' << static_cast<int>(m.flags[q]) << '\n';
      }
    }
  }
}

std::string serialize_mesh(const MeshedLagrangian& mesh) {
  std::ostringstream os;
  write_mesh(os, mesh);
  return os.str();
}

MeshedLagrangian read_mesh(std::istream& is) {
  std::string header;
  if (!std::getline(is, header) || header != "# wcl-mesh 1") throw DomainError("mesh: missing '# wcl-mesh 1' header");
  int line = 1;
  MeshedLagrangian m;
  {
    auto in = next_line(is, line);
    m.n = take<int>(in, "n", line);
    m.Na = take<int>(in, "Na", line);
    m.Nb = take<int>(in, "Nb", line);
    m.Nv = take<int>(in, "Nv", line);
  }
  if (m.n < 1 || m.Na < 3 || m.Nb < 3 || m.Nv < 3) throw DomainError("mesh: bad dimensions");
  {
    auto in = next_line(is, line);
    m.a0 = take<double>(in, "a0", line);
    m.a1 = take<double>(in, "a1", line);
    m.b0 = take<double>(in, "b0", line);
    m.b1 = take<double>(in, "b1", line);
    m.v0 = take<double>(in, "v0", line);
    m.v1 = take<double>(in, "v1", line);
  }
  const std::size_t count = static_cast<std::size_t>(m.Na) * m.Nb * m.Nv;
  m.nodes.assign(count, Vec());
  m.flags.assign(count, NodeOk);
  for (std::size_t q = 0; q < count; ++q) {
    auto in = next_line(is, line);
    const int i = take<int>(in, "i", line), j = take<int>(in, "j", line), k = take<int>(in, "k", line);
    if (i < 0 || j < 0 || k < 0 || i >= m.Na || j >= m.Nb || k >= m.Nv || m.index(i, j, k) != static_cast<int>(q)) {
      throw DomainError("mesh line " + std::to_string(line) + ": node index out of order");
    }
    for (int c = 0; c < 3; ++c) take<double>(in, "parameter", line);
    Vec node(2 * m.n + 2);
    for (int c = 0; c < node.size(); ++c) node(c) = take<double>(in, "coordinate", line);
    const int flag = take<int>(in, "flags", line);
    if (flag < 0 || flag > (NodeTruncated | NodeCore)) throw DomainError("mesh line " + std::to_string(line) + ": bad flags");
    std::string extra;
    if (in >> extra) throw DomainError("mesh line " + std::to_string(line) + ": trailing data");
    m.nodes[q] = node;
    m.flags[q] = static_cast<std::uint8_t>(flag);
  }
  std::string rest;
  while (std::getline(is, rest)) {
    if (rest.find_first_not_of(" \t\r") != std::string::npos) throw DomainError("mesh: data after the last node");
  }
  m.validate();
  return m;
}

MeshedLagrangian parse_mesh(const std::string& text) {
  std::istringstream is(text);
  return read_mesh(is);
}

}  // namespace wcl
