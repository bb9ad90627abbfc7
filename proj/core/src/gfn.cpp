#include "twp/gfn.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <iterator>
#include <nlohmann/json.hpp>
#include <ostream>

#include "twp/error.hpp"

namespace twp {
namespace {

void put_f64(std::string& buf, double v) {
  std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((bits >> (8 * i)) & 0xffu));
}

double get_f64(const unsigned char* p) {
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return std::bit_cast<double>(bits);
}

}  // namespace

void write_gfn(std::ostream& out, const GridFunction2D& f) {
  nlohmann::json header = {{"n", f.n()},
                           {"l", f.geometry().l()},
                           {"layout", "row-major"},
                           {"dtype", "c128"}};
  out << header.dump() << '\n';
  std::string buf;
  buf.reserve(f.values().size() * 16);
  for (const auto& v : f.values()) {
    put_f64(buf, v.real());
    put_f64(buf, v.imag());
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw Error("failed writing grid function");
}

void write_gfn(const std::string& path, const GridFunction2D& f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  write_gfn(out, f);
}

GridFunction2D read_gfn(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("missing .gfn header", 0);
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("bad .gfn header: ") + e.what(), e.byte);
  }
  if (header.value("layout", "") != "row-major" || header.value("dtype", "") != "c128")
    throw ParseError(".gfn header must declare row-major c128 data", 0);
  if (!header.contains("n") || !header.contains("l"))
    throw ParseError(".gfn header lacks n or l", 0);
  GridGeometry geo(header.at("n").get<std::size_t>(), header.at("l").get<double>());

  std::string body((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const std::size_t count = geo.n() * geo.n();
  if (body.size() != count * 16)
    throw ParseError(".gfn payload has " + std::to_string(body.size()) + " bytes, expected " +
                         std::to_string(count * 16),
                     line.size() + 1);
  std::vector<cplx> values(count);
  const auto* p = reinterpret_cast<const unsigned char*>(body.data());
  for (std::size_t i = 0; i < count; ++i) values[i] = {get_f64(p + 16 * i), get_f64(p + 16 * i + 8)};
  return GridFunction2D(geo, std::move(values));
}

GridFunction2D read_gfn(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  return read_gfn(in);
}

}  // namespace twp
