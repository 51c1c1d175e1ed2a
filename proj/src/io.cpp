#include "spamri/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace spamri::io {

using nlohmann::json;

namespace {

static_assert(std::endian::native == std::endian::little, "little-endian host required");

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

json read_json(const fs::path& path) {
  try {
    return json::parse(read_text(path));
  } catch (const json::exception& e) {
    throw IoError("malformed sidecar " + path.string() + ": " + e.what());
  }
}

template <class T>
T field(const json& j, const char* key, const fs::path& path) {
  if (!j.contains(key)) throw IoError("sidecar " + path.string() + " lacks '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw IoError("sidecar " + path.string() + " has a bad '" + key + "'");
  }
}

void write_doubles(const fs::path& path, const std::vector<double>& v) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(v.data()),
            static_cast<std::streamsize>(v.size() * sizeof(double)));
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<double> read_doubles(const fs::path& path, std::size_t expected) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw IoError("cannot open " + path.string());
  const auto bytes = static_cast<std::size_t>(in.tellg());
  if (bytes != expected * sizeof(double)) {
    throw IoError(path.string() + ": expected " + std::to_string(expected * sizeof(double)) +
                  " bytes, found " + std::to_string(bytes));
  }
  in.seekg(0);
  std::vector<double> v(expected);
  in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(bytes));
  if (!in) throw IoError("read failed: " + path.string());
  return v;
}

std::size_t dim(const json& j, const char* key, const fs::path& path) {
  const auto v = field<long long>(j, key, path);
  if (v < 1) throw IoError("sidecar " + path.string() + ": '" + key + "' must be positive");
  return static_cast<std::size_t>(v);
}

}  // namespace

fs::path sidecar_path(const fs::path& data_path) {
  fs::path p = data_path;
  p += ".json";
  return p;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("write failed: " + path.string());
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_image(const fs::path& path, const ImageGrid& img, double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw ConfigError("image scale must be positive");
  std::vector<double> v(img.values().begin(), img.values().end());
  for (double& x : v) x /= scale;
  write_doubles(path, v);
  write_json(sidecar_path(path), {{"height", img.height()},
                                  {"width", img.width()},
                                  {"dtype", "float64"},
                                  {"scale", scale}});
}

ImageGrid read_image(const fs::path& path) {
  const fs::path side = sidecar_path(path);
  const json j = read_json(side);
  if (field<std::string>(j, "dtype", side) != "float64") {
    throw IoError(side.string() + ": only float64 images are supported");
  }
  const std::size_t h = dim(j, "height", side);
  const std::size_t w = dim(j, "width", side);
  const double scale = j.contains("scale") ? field<double>(j, "scale", side) : 1.0;
  std::vector<double> v = read_doubles(path, h * w);
  for (double& x : v) x *= scale;
  return ImageGrid(h, w, std::move(v));
}

void write_pgm(const fs::path& path, const ImageGrid& img) {
  double lo = 0.0, hi = 0.0;
  bool first = true;
  for (double v : img.values()) {
    if (!std::isfinite(v)) continue;
    if (first) {
      lo = hi = v;
      first = false;
    }
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double span = hi > lo ? hi - lo : 1.0;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << "P5\n" << img.width() << ' ' << img.height() << "\n65535\n";
  for (double v : img.values()) {
    const double t = std::isfinite(v) ? std::clamp((v - lo) / span, 0.0, 1.0) : 0.0;
    const auto q = static_cast<unsigned>(std::lround(t * 65535.0));
    const char bytes[2] = {static_cast<char>(q >> 8), static_cast<char>(q & 0xff)};
    out.write(bytes, 2);
  }
  if (!out) throw IoError("write failed: " + path.string());
}

void write_mask(const fs::path& path, const SamplingMask& mask, const MaskSpec& spec) {
  std::ostringstream s;
  s << "P1\n" << mask.width() << ' ' << mask.height() << '\n';
  for (std::size_t r = 0; r < mask.height(); ++r) {
    for (std::size_t c = 0; c < mask.width(); ++c) {
      if (c > 0) s << ' ';
      s << (mask.kept(r * mask.width() + c) ? '1' : '0');
    }
    s << '\n';
  }
  write_text(path, s.str());
  write_json(sidecar_path(path), {{"ratio", spec.ratio},
                                  {"scheme", to_string(spec.scheme)},
                                  {"center_fraction", spec.center_fraction},
                                  {"seed", spec.seed}});
}

SamplingMask read_mask(const fs::path& path) {
  std::istringstream in(read_text(path));
  std::string magic;
  in >> magic;
  if (magic != "P1") throw IoError(path.string() + ": not a plain PBM (P1) file");
  auto next_token = [&](std::string& tok) {
    while (in >> tok) {
      if (tok[0] != '#') return true;
      std::string rest;
      std::getline(in, rest);
    }
    return false;
  };
  std::string tw, th;
  if (!next_token(tw) || !next_token(th)) throw IoError(path.string() + ": truncated header");
  std::size_t w = 0, h = 0;
  try {
    w = std::stoul(tw);
    h = std::stoul(th);
  } catch (const std::exception&) {
    throw IoError(path.string() + ": bad dimensions");
  }
  std::vector<std::uint8_t> keep;
  keep.reserve(w * h);
  char ch;
  while (keep.size() < w * h && in.get(ch)) {
    if (ch == '#') {
      std::string rest;
      std::getline(in, rest);
    } else if (ch == '0' || ch == '1') {
      keep.push_back(ch == '1' ? 1 : 0);
    } else if (!std::isspace(static_cast<unsigned char>(ch))) {
      throw IoError(path.string() + ": unexpected character in pixel data");
    }
  }
  if (keep.size() != w * h) throw IoError(path.string() + ": truncated pixel data");
  try {
    return SamplingMask(h, w, std::move(keep));
  } catch (const ConfigError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

MaskSpec read_mask_spec(const fs::path& path) {
  const fs::path side = sidecar_path(path);
  const json j = read_json(side);
  MaskSpec spec;
  spec.ratio = field<double>(j, "ratio", side);
  spec.scheme = parse_mask_scheme(field<std::string>(j, "scheme", side));
  if (j.contains("center_fraction")) spec.center_fraction = field<double>(j, "center_fraction", side);
  spec.seed = field<std::uint64_t>(j, "seed", side);
  return spec;
}

void write_kspace(const fs::path& path, const KSpaceData& y, const std::string& mask_file) {
  std::vector<double> v;
  v.reserve(2 * y.locations.size() * y.coil_count());
  for (const auto& coil : y.coils) {
    for (const Complex& z : coil) {
      v.push_back(z.real());
      v.push_back(z.imag());
    }
  }
  write_doubles(path, v);
  write_json(sidecar_path(path), {{"height", y.height},
                                  {"width", y.width},
                                  {"coils", y.coil_count()},
                                  {"mask_file", mask_file},
                                  {"sigma", y.sigma}});
}

LoadedKSpace read_kspace(const fs::path& path) {
  const fs::path side = sidecar_path(path);
  const json j = read_json(side);
  const std::size_t h = dim(j, "height", side);
  const std::size_t w = dim(j, "width", side);
  const std::size_t coils = dim(j, "coils", side);
  const double sigma = field<double>(j, "sigma", side);
  if (!(sigma >= 0.0)) throw IoError(side.string() + ": sigma must be non-negative");
  const fs::path mask_path = path.parent_path() / field<std::string>(j, "mask_file", side);
  SamplingMask mask = read_mask(mask_path);
  if (mask.height() != h || mask.width() != w) {
    throw ShapeError("k-space is " + std::to_string(h) + "x" + std::to_string(w) + " but mask is " +
                     std::to_string(mask.height()) + "x" + std::to_string(mask.width()));
  }
  const std::size_t m = mask.count();
  const std::vector<double> v = read_doubles(path, 2 * m * coils);
  KSpaceData y;
  y.height = h;
  y.width = w;
  y.locations = mask.indices();
  y.sigma = sigma;
  y.coils.assign(coils, std::vector<Complex>(m));
  for (std::size_t l = 0; l < coils; ++l) {
    for (std::size_t k = 0; k < m; ++k) {
      const std::size_t i = 2 * (l * m + k);
      y.coils[l][k] = Complex(v[i], v[i + 1]);
    }
  }
  return {std::move(y), std::move(mask)};
}

void write_coils(const fs::path& path, const CoilSensitivities& coils) {
  std::vector<double> v;
  v.reserve(2 * coils.count() * coils.height() * coils.width());
  for (const auto& m : coils.maps()) {
    for (const Complex& z : m.values()) {
      v.push_back(z.real());
      v.push_back(z.imag());
    }
  }
  write_doubles(path, v);
  write_json(sidecar_path(path),
             {{"height", coils.height()}, {"width", coils.width()}, {"coils", coils.count()}});
}

CoilSensitivities read_coils(const fs::path& path) {
  const fs::path side = sidecar_path(path);
  const json j = read_json(side);
  const std::size_t h = dim(j, "height", side);
  const std::size_t w = dim(j, "width", side);
  const std::size_t n = dim(j, "coils", side);
  const std::vector<double> v = read_doubles(path, 2 * n * h * w);
  std::vector<ComplexGrid> maps;
  for (std::size_t l = 0; l < n; ++l) {
    std::vector<Complex> plane(h * w);
    for (std::size_t i = 0; i < h * w; ++i) {
      const std::size_t k = 2 * (l * h * w + i);
      plane[i] = Complex(v[k], v[k + 1]);
    }
    maps.emplace_back(h, w, std::move(plane));
  }
  return CoilSensitivities(std::move(maps));
}

}  // namespace spamri::io
