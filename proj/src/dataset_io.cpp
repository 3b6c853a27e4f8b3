#include "dra/dataset_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include "dra/crc32.hpp"
#include "dra/errors.hpp"

namespace dra {
namespace {

constexpr char kMagic[4] = {'B', 'T', 'D', 'S'};
constexpr std::uint8_t kVersion = 1;

const char* const kSpecCols[] = {"bw_az_deg",  "bw_el_deg",    "sll_az_db",
                                 "sll_el_db",  "eirp_dbw",     "steer_az_deg",
                                 "steer_el_deg", "n_active"};
const char* const kMetaCols[] = {"cost", "accepted", "split"};
const char* const kAchCols[] = {"ach_bw_az_deg",       "ach_bw_el_deg",
                                "ach_sll_az_db",       "ach_sll_el_db",
                                "ach_eirp_dbw",        "ach_directivity_dbi",
                                "ach_peak_az_deg",     "ach_peak_el_deg"};

std::string fmt9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

double parse_double_strict(const std::string& tok, const char* what,
                           std::size_t line) {
  if (tok.empty())
    throw DataError("dataset row " + std::to_string(line) + ": empty " + what);
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end != tok.c_str() + tok.size())
    throw DataError("dataset row " + std::to_string(line) + ": bad " + what +
                    " value '" + tok + "'");
  return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

std::array<double, 8> achieved_to_array(const BeamMetrics& m) {
  return {m.bw_az_deg,  m.bw_el_deg,       m.sll_az_db,   m.sll_el_db,
          m.eirp_dbw,   m.directivity_dbi, m.peak_az_deg, m.peak_el_deg};
}

BeamMetrics achieved_from_array(const std::array<double, 8>& a) {
  BeamMetrics m;
  m.bw_az_deg = a[0];
  m.bw_el_deg = a[1];
  m.sll_az_db = a[2];
  m.sll_el_db = a[3];
  m.eirp_dbw = a[4];
  m.directivity_dbi = a[5];
  m.peak_az_deg = a[6];
  m.peak_el_deg = a[7];
  return m;
}

std::size_t dataset_bit_count(const Dataset& ds) {
  std::size_t n = 324;
  if (!ds.samples.empty()) n = ds.samples[0].quadrant_bits.size();
  for (const auto& s : ds.samples)
    if (s.quadrant_bits.size() != n)
      throw DataError("dataset has inconsistent weight-bit lengths");
  return n;
}

void save_csv(const Dataset& ds, const std::string& path) {
  const std::size_t nbits = dataset_bit_count(ds);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  for (std::size_t i = 0; i < 8; ++i) out << kSpecCols[i] << ',';
  for (const char* c : kMetaCols) out << c << ',';
  for (std::size_t i = 0; i < nbits; ++i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "w%03zu,", i);
    out << buf;
  }
  for (std::size_t i = 0; i < 8; ++i)
    out << kAchCols[i] << (i + 1 < 8 ? "," : "\n");
  for (const auto& s : ds.samples) {
    const auto f = s.spec.to_features();
    for (double v : f) out << fmt9(v) << ',';
    out << fmt9(s.cost) << ',' << (s.accepted ? 1 : 0) << ','
        << split_name(s.split) << ',';
    for (std::size_t i = 0; i < nbits; ++i)
      out << (s.quadrant_bits[i] ? '1' : '0') << ',';
    const auto a = achieved_to_array(s.achieved);
    for (std::size_t i = 0; i < 8; ++i)
      out << fmt9(a[i]) << (i + 1 < 8 ? "," : "\n");
  }
  if (!out.good()) throw DataError("write failure on '" + path + "'");
}

Dataset load_csv(std::istream& in, const std::string& path) {
  std::string line;
  if (!std::getline(in, line))
    throw DataError("'" + path + "': empty dataset file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto head = split_csv_line(line);
  std::size_t col = 0;
  const auto expect = [&](const char* name) {
    if (col >= head.size() || head[col] != name)
      throw DataError("'" + path + "': missing or misplaced column '" +
                      std::string(name) + "' (found '" +
                      (col < head.size() ? head[col] : std::string("<end>")) +
                      "')");
    ++col;
  };
  for (const char* c : kSpecCols) expect(c);
  for (const char* c : kMetaCols) expect(c);
  std::size_t nbits = 0;
  while (col < head.size()) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "w%03zu", nbits);
    if (head[col] == buf) {
      ++col;
      ++nbits;
    } else {
      break;
    }
  }
  if (nbits == 0)
    throw DataError("'" + path + "': missing column 'w000'");
  // A quadrant block is square; a non-square count means a truncated block.
  const auto root = static_cast<std::size_t>(std::lround(std::sqrt(double(nbits))));
  if (root * root != nbits) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "w%03zu", nbits);
    throw DataError("'" + path + "': weight block has " +
                    std::to_string(nbits) +
                    " columns, which is not a square quadrant; missing column '" +
                    std::string(buf) + "'");
  }
  for (const char* c : kAchCols) expect(c);
  if (col != head.size())
    throw DataError("'" + path + "': unexpected extra column '" + head[col] +
                    "'");
  const std::size_t ncols = head.size();

  Dataset ds;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tok = split_csv_line(line);
    if (tok.size() != ncols)
      throw DataError("'" + path + "' row " + std::to_string(lineno) + ": " +
                      std::to_string(tok.size()) + " fields, expected " +
                      std::to_string(ncols));
    Sample s;
    std::array<double, 8> f{};
    std::size_t t = 0;
    for (std::size_t i = 0; i < 8; ++i)
      f[i] = parse_double_strict(tok[t++], kSpecCols[i], lineno);
    s.spec = BeamSpec::from_features(f);
    s.cost = parse_double_strict(tok[t++], "cost", lineno);
    if (tok[t] == "0")
      s.accepted = false;
    else if (tok[t] == "1")
      s.accepted = true;
    else
      throw DataError("'" + path + "' row " + std::to_string(lineno) +
                      ": accepted flag must be 0 or 1, got '" + tok[t] + "'");
    ++t;
    s.split = split_from_name(tok[t++]);
    s.quadrant_bits.resize(nbits);
    for (std::size_t i = 0; i < nbits; ++i, ++t) {
      if (tok[t] == "0")
        s.quadrant_bits[i] = 0;
      else if (tok[t] == "1")
        s.quadrant_bits[i] = 1;
      else
        throw DataError("'" + path + "' row " + std::to_string(lineno) +
                        ": weight bit must be 0 or 1, got '" + tok[t] + "'");
    }
    std::array<double, 8> a{};
    for (std::size_t i = 0; i < 8; ++i)
      a[i] = parse_double_strict(tok[t++], kAchCols[i], lineno);
    s.achieved = achieved_from_array(a);
    ds.samples.push_back(std::move(s));
  }
  return ds;
}

template <typename T>
void put(std::vector<char>& buf, T v) {
  char raw[sizeof(T)];
  std::memcpy(raw, &v, sizeof(T));
  buf.insert(buf.end(), raw, raw + sizeof(T));
}

template <typename T>
T take(const std::string& buf, std::size_t& off, const std::string& path) {
  if (off + sizeof(T) > buf.size())
    throw DataError("'" + path + "': truncated dataset file");
  T v;
  std::memcpy(&v, buf.data() + off, sizeof(T));
  off += sizeof(T);
  return v;
}

void save_bin(const Dataset& ds, const std::string& path) {
  const std::size_t nbits = dataset_bit_count(ds);
  std::vector<char> payload;
  payload.reserve(64 + ds.samples.size() * (17 * 8 + 2 + (nbits + 7) / 8));
  put<std::uint8_t>(payload, kVersion);
  put<std::uint32_t>(payload, static_cast<std::uint32_t>(nbits));
  put<std::uint64_t>(payload, static_cast<std::uint64_t>(ds.samples.size()));
  for (const auto& s : ds.samples) {
    for (double v : s.spec.to_features()) put<double>(payload, v);
    for (double v : achieved_to_array(s.achieved)) put<double>(payload, v);
    put<double>(payload, s.cost);
    put<std::uint8_t>(payload, s.accepted ? 1 : 0);
    put<std::uint8_t>(payload, static_cast<std::uint8_t>(s.split));
    std::vector<std::uint8_t> packed((nbits + 7) / 8, 0);
    for (std::size_t i = 0; i < nbits; ++i)
      if (s.quadrant_bits[i]) packed[i / 8] |= std::uint8_t(1u << (i % 8));
    for (std::uint8_t b : packed) put<std::uint8_t>(payload, b);
  }
  const std::uint32_t crc = crc32(payload.data(), payload.size());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  out.write(kMagic, 4);
  out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
  char raw[4];
  std::memcpy(raw, &crc, 4);
  out.write(raw, 4);
  if (!out.good()) throw DataError("write failure on '" + path + "'");
}

Dataset load_bin(const std::string& content, const std::string& path) {
  if (content.size() < 4 + 1 + 4 + 8 + 4)
    throw DataError("'" + path + "': truncated dataset file");
  if (std::memcmp(content.data(), kMagic, 4) != 0)
    throw DataError("'" + path + "': not a binary dataset file");
  const std::size_t payload_end = content.size() - 4;
  std::uint32_t stored_crc;
  std::memcpy(&stored_crc, content.data() + payload_end, 4);
  const std::uint32_t actual_crc =
      crc32(content.data() + 4, payload_end - 4);
  if (stored_crc != actual_crc)
    throw DataError("'" + path + "': checksum mismatch (corrupt dataset)");
  std::size_t off = 4;
  const auto version = take<std::uint8_t>(content, off, path);
  if (version != kVersion)
    throw DataError("'" + path + "': unsupported dataset version " +
                    std::to_string(int(version)) + " (expected " +
                    std::to_string(int(kVersion)) + ")");
  const auto nbits = take<std::uint32_t>(content, off, path);
  const auto nsamples = take<std::uint64_t>(content, off, path);
  Dataset ds;
  ds.samples.reserve(nsamples);
  for (std::uint64_t k = 0; k < nsamples; ++k) {
    if (payload_end < off) throw DataError("'" + path + "': truncated dataset file");
    Sample s;
    std::array<double, 8> f{};
    for (auto& v : f) v = take<double>(content, off, path);
    s.spec = BeamSpec::from_features(f);
    std::array<double, 8> a{};
    for (auto& v : a) v = take<double>(content, off, path);
    s.achieved = achieved_from_array(a);
    s.cost = take<double>(content, off, path);
    s.accepted = take<std::uint8_t>(content, off, path) != 0;
    const auto sp = take<std::uint8_t>(content, off, path);
    if (sp > 3)
      throw DataError("'" + path + "': invalid split code " +
                      std::to_string(int(sp)));
    s.split = static_cast<Split>(sp);
    s.quadrant_bits.assign(nbits, 0);
    for (std::uint32_t i = 0; i < (nbits + 7) / 8; ++i) {
      const auto byte = take<std::uint8_t>(content, off, path);
      for (std::uint32_t b = 0; b < 8 && i * 8 + b < nbits; ++b)
        s.quadrant_bits[i * 8 + b] = (byte >> b) & 1u;
    }
    ds.samples.push_back(std::move(s));
  }
  if (off != payload_end)
    throw DataError("'" + path + "': trailing bytes after the last sample");
  return ds;
}

}  // namespace

DatasetFormat dataset_format_from_name(const std::string& name) {
  if (name == "csv") return DatasetFormat::Csv;
  if (name == "bin" || name == "binary") return DatasetFormat::Binary;
  throw ConfigError("unknown dataset format '" + name + "' (use csv or bin)");
}

void save_dataset(const Dataset& ds, const std::string& path,
                  DatasetFormat format) {
  if (format == DatasetFormat::Csv)
    save_csv(ds, path);
  else
    save_bin(ds, path);
}

Dataset load_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string content = ss.str();
  if (content.size() >= 4 && std::memcmp(content.data(), kMagic, 4) == 0)
    return load_bin(content, path);
  std::istringstream text(content);
  return load_csv(text, path);
}

}  // namespace dra
