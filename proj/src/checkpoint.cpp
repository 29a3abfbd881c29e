#include "imcf/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>

namespace imcf {

static_assert(std::endian::native == std::endian::little,
              "checkpoint writer assumes a little-endian host");

namespace {

constexpr char kMagic[8] = {'I', 'M', 'C', 'F', 'C', 'K', 'P', '1'};

template <class T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::istream& in) {
  T v;
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!in) throw CheckpointError("truncated checkpoint");
  return v;
}

void put_doubles(std::ostream& out, const std::vector<double>& v) {
  out.write(reinterpret_cast<const char*>(v.data()),
            static_cast<std::streamsize>(v.size() * sizeof(double)));
}

void get_doubles(std::istream& in, std::vector<double>& v) {
  in.read(reinterpret_cast<char*>(v.data()),
          static_cast<std::streamsize>(v.size() * sizeof(double)));
  if (!in) throw CheckpointError("truncated checkpoint field data");
}

}  // namespace

void save_checkpoint(const std::string& path, const Checkpoint& ck) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CheckpointError("cannot write checkpoint: " + path);
  out.write(kMagic, 8);
  put<std::uint32_t>(out, ck.version);
  put<std::uint64_t>(out, ck.scenario_hash);
  put<std::uint64_t>(out, ck.scenario_text.size());
  out.write(ck.scenario_text.data(), static_cast<std::streamsize>(ck.scenario_text.size()));

  const DomainSpec& dom = ck.g.dom();
  put<std::uint8_t>(out, static_cast<std::uint8_t>(dom.kind));
  put<std::uint8_t>(out, static_cast<std::uint8_t>(dom.boundary));
  put<std::uint8_t>(out, static_cast<std::uint8_t>(dom.stencil_order));
  put<std::uint8_t>(out, static_cast<std::uint8_t>(dom.interp_order));
  put<std::uint8_t>(out, ck.gauge.has_value() ? 1 : 0);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(dom.n));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(dom.naxes()));
  for (int a = 0; a < dom.naxes(); ++a) {
    put<std::uint64_t>(out, static_cast<std::uint64_t>(dom.shape[a]));
    put<double>(out, dom.spacing[a]);
    put<double>(out, dom.origin[a]);
  }
  put<double>(out, ck.t);
  put<std::uint64_t>(out, ck.step);
  put<double>(out, ck.M_norm);
  put_doubles(out, ck.g.raw());
  put_doubles(out, ck.h.raw());
  if (ck.gauge) {
    put_doubles(out, ck.gauge->s.raw());
    put_doubles(out, ck.gauge->F.raw());
  }
  if (!out) throw CheckpointError("write failure: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open checkpoint: " + path);
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kMagic, 8) != 0)
    throw CheckpointError("bad checkpoint magic: " + path);

  Checkpoint ck;
  ck.version = get<std::uint32_t>(in);
  if (ck.version != 1)
    throw CheckpointError("unsupported checkpoint version " + std::to_string(ck.version));
  ck.scenario_hash = get<std::uint64_t>(in);
  std::uint64_t tlen = get<std::uint64_t>(in);
  ck.scenario_text.resize(tlen);
  in.read(ck.scenario_text.data(), static_cast<std::streamsize>(tlen));
  if (!in) throw CheckpointError("truncated scenario text");

  DomainSpec dom;
  dom.kind = static_cast<DomainKind>(get<std::uint8_t>(in));
  dom.boundary = static_cast<BoundaryPolicy>(get<std::uint8_t>(in));
  dom.stencil_order = get<std::uint8_t>(in);
  dom.interp_order = get<std::uint8_t>(in);
  bool has_gauge = get<std::uint8_t>(in) != 0;
  dom.n = static_cast<int>(get<std::uint32_t>(in));
  std::uint32_t naxes = get<std::uint32_t>(in);
  for (std::uint32_t a = 0; a < naxes; ++a) {
    dom.shape.push_back(static_cast<int>(get<std::uint64_t>(in)));
    dom.spacing.push_back(get<double>(in));
    dom.origin.push_back(get<double>(in));
  }
  ck.t = get<double>(in);
  ck.step = get<std::uint64_t>(in);
  ck.M_norm = get<double>(in);
  ck.g = Sym2Field(dom);
  ck.h = Sym2Field(dom);
  get_doubles(in, ck.g.raw());
  get_doubles(in, ck.h.raw());
  if (has_gauge) {
    GaugeData gd{Sym2Field(dom), VectorField(dom)};
    get_doubles(in, gd.s.raw());
    get_doubles(in, gd.F.raw());
    ck.gauge = std::move(gd);
  }
  return ck;
}

}  // namespace imcf
