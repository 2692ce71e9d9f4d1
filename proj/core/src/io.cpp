#include "fracpar/io.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

namespace fracpar {

namespace {

void put_double_le(std::string& buf, double v) {
  std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
  for (int b = 0; b < 8; ++b) {
    buf.push_back(static_cast<char>((bits >> (8 * b)) & 0xff));
  }
}

double get_double_le(const char* p) {
  std::uint64_t bits = 0;
  for (int b = 7; b >= 0; --b) {
    bits = (bits << 8) | static_cast<std::uint8_t>(p[b]);
  }
  return std::bit_cast<double>(bits);
}

struct Header {
  std::map<std::string, std::string> kv;
  Grid grid;
};

std::string header_line(const Grid& g, const std::string& extra) {
  std::ostringstream os;
  os << "FRACPAR1 n=" << g.spatial_dims << " nx=" << g.nx << " nt=" << g.nt
     << " Lx=" << format_double(g.Lx) << " Lt=" << format_double(g.Lt) << extra
     << "\n";
  return os.str();
}

Header parse_header(std::istream& in, const std::string& path) {
  std::string line;
  if (!std::getline(in, line)) {
    throw IoError("empty or unreadable file: " + path);
  }
  std::istringstream ls(line);
  std::string magic;
  ls >> magic;
  if (magic != "FRACPAR1") {
    throw IoError("not a FRACPAR1 file: " + path);
  }
  Header h;
  std::string tok;
  while (ls >> tok) {
    auto eq = tok.find('=');
    if (eq == std::string::npos) {
      throw IoError("malformed header token '" + tok + "' in " + path);
    }
    h.kv[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  for (const char* need : {"n", "nx", "nt", "Lx", "Lt"}) {
    if (!h.kv.count(need)) {
      throw IoError(std::string("missing header key ") + need + " in " + path);
    }
  }
  try {
    h.grid = Grid::make(std::stoi(h.kv["n"]), std::stoi(h.kv["nx"]),
                        std::stoi(h.kv["nt"]), std::stod(h.kv["Lx"]),
                        std::stod(h.kv["Lt"]));
  } catch (const std::exception& e) {
    throw IoError("invalid grid in header of " + path + ": " + e.what());
  }
  return h;
}

std::string read_payload(std::istream& in, std::size_t bytes,
                         const std::string& path) {
  std::string data(bytes, '\0');
  in.read(data.data(), static_cast<std::streamsize>(bytes));
  if (static_cast<std::size_t>(in.gcount()) != bytes) {
    throw IoError("truncated payload in " + path);
  }
  return data;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_field_fracpar1(const std::string& path, const Field& u) {
  std::string out = header_line(u.grid, "");
  out.reserve(out.size() + u.size() * 16);
  for (const cplx& z : u.values) {
    put_double_le(out, z.real());
    put_double_le(out, z.imag());
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open for writing: " + path);
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw IoError("write failed: " + path);
}

Field read_field_fracpar1(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open: " + path);
  Header h = parse_header(f, path);
  if (h.kv.count("tag")) {
    throw IoError("expected a plain field file (no tag) in " + path);
  }
  const std::size_t n = h.grid.size();
  std::string data = read_payload(f, n * 16, path);
  Field u(h.grid);
  for (std::size_t i = 0; i < n; ++i) {
    u.values[i] = cplx(get_double_le(data.data() + 16 * i),
                       get_double_le(data.data() + 16 * i + 8));
  }
  return u;
}

void write_coefficients_fracpar1(const std::string& path,
                                 const CoefficientField& A) {
  std::string extra = " tag=A c1=" + format_double(A.c1) +
                      " c2=" + format_double(A.c2);
  std::string out = header_line(A.grid, extra);
  out.reserve(out.size() + A.entries.size() * 16);
  for (const cplx& z : A.entries) {
    put_double_le(out, z.real());
    put_double_le(out, z.imag());
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open for writing: " + path);
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw IoError("write failed: " + path);
}

CoefficientField read_coefficients_fracpar1(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open: " + path);
  Header h = parse_header(f, path);
  if (!h.kv.count("tag") || h.kv["tag"] != "A") {
    throw IoError("expected a coefficient file (tag=A) in " + path);
  }
  CoefficientField A;
  A.grid = h.grid;
  A.c1 = h.kv.count("c1") ? std::stod(h.kv["c1"]) : 1.0;
  A.c2 = h.kv.count("c2") ? std::stod(h.kv["c2"]) : 1.0;
  const int nn = h.grid.spatial_dims * h.grid.spatial_dims;
  const std::size_t count = h.grid.size() * nn;
  std::string data = read_payload(f, count * 16, path);
  A.entries.resize(count);
  bool real = true;
  for (std::size_t i = 0; i < count; ++i) {
    A.entries[i] = cplx(get_double_le(data.data() + 16 * i),
                        get_double_le(data.data() + 16 * i + 8));
    if (A.entries[i].imag() != 0.0) real = false;
  }
  A.is_real = real;
  if (h.grid.spatial_dims == 2) {
    A.is_symmetric = true;
    for (std::size_t p = 0; p < h.grid.size() && A.is_symmetric; ++p) {
      if (A.entries[p * 4 + 1] != A.entries[p * 4 + 2]) A.is_symmetric = false;
    }
  }
  return A;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open for writing: " + path);
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!f) throw IoError("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace fracpar
