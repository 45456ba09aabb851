#include "exactrank/table_cache.hpp"

#include <array>
#include <cstring>
#include <fstream>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "exactrank/errors.hpp"

namespace exactrank {
namespace {

constexpr std::array<char, 8> kMagic{'X', 'R', 'K', 'T', 'A', 'B', 'L', 'E'};

template <typename T>
void put(std::ostream& out, T value) {
  std::array<char, sizeof(T)> bytes{};
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    bytes[i] = static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xFFU);
  }
  out.write(bytes.data(), bytes.size());
}

template <typename T>
T get(std::istream& in) {
  std::array<unsigned char, sizeof(T)> bytes{};
  if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) {
    throw InputError("coefficient table truncated");
  }
  std::uint64_t value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) value |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return static_cast<T>(value);
}

void put_bigint(std::ostream& out, const BigInt& value) {
  if (value == 0) {
    put<std::uint32_t>(out, 0);
    return;
  }
  const std::size_t size = (mpz_sizeinbase(value.get_mpz_t(), 2) + 7) / 8;
  std::string buf(size, '\0');
  std::size_t written = 0;
  mpz_export(buf.data(), &written, 1, 1, 1, 0, value.get_mpz_t());
  put<std::uint32_t>(out, static_cast<std::uint32_t>(written));
  out.write(buf.data(), static_cast<std::streamsize>(written));
}

BigInt get_bigint(std::istream& in) {
  const auto size = get<std::uint32_t>(in);
  BigInt out = 0;
  if (size == 0) return out;
  std::string buf(size, '\0');
  if (!in.read(buf.data(), size)) throw InputError("coefficient table truncated");
  mpz_import(out.get_mpz_t(), size, 1, 1, 1, 0, buf.data());
  return out;
}

std::string pattern_hex(const TiePattern& pattern) {
  static constexpr char digits[] = "0123456789abcdef";
  const auto& bits = pattern.bits();
  std::string out;
  for (std::size_t i = 0; i < bits.size(); i += 4) {
    unsigned nibble = 0;
    for (std::size_t j = 0; j < 4; ++j) {
      nibble <<= 1;
      if (i + j < bits.size() && bits[i + j]) nibble |= 1U;
    }
    out.push_back(digits[nibble]);
  }
  return out.empty() ? "x" : out;
}

}  // namespace

void write_table(std::ostream& out, const TableKey& key, const CoeffTable& table) {
  out.write(kMagic.data(), kMagic.size());
  put<std::uint32_t>(out, kTableFormatVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(key.total));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(key.n1));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(table.k_max));
  const auto& bits = key.pattern.bits();
  put<std::uint32_t>(out, static_cast<std::uint32_t>(bits.size()));
  for (std::size_t i = 0; i < bits.size(); i += 8) {
    unsigned byte = 0;
    for (std::size_t j = 0; j < 8; ++j) {
      byte <<= 1;
      if (i + j < bits.size() && bits[i + j]) byte |= 1U;
    }
    out.put(static_cast<char>(byte));
  }
  for (const auto& row : table.rows) {
    put<std::uint64_t>(out, row.coeffs().size());
    for (const auto& c : row.coeffs()) put_bigint(out, c);
  }
}

CoeffTable read_table(std::istream& in, TableKey* key_out) {
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw InputError("not a coefficient table file");
  }
  const auto version = get<std::uint32_t>(in);
  if (version != kTableFormatVersion) {
    throw InputError("unsupported coefficient table version " + std::to_string(version));
  }
  TableKey key;
  key.total = static_cast<int>(get<std::uint32_t>(in));
  key.n1 = static_cast<int>(get<std::uint32_t>(in));
  CoeffTable table;
  table.total = key.total;
  table.k_max = static_cast<int>(get<std::uint32_t>(in));
  if (table.k_max > table.total) throw InputError("corrupt coefficient table header");
  const auto nbits = get<std::uint32_t>(in);
  std::vector<bool> bits(nbits);
  for (std::size_t i = 0; i < nbits; i += 8) {
    const int byte = in.get();
    if (byte == std::char_traits<char>::eof()) throw InputError("coefficient table truncated");
    for (std::size_t j = 0; j < 8 && i + j < nbits; ++j) bits[i + j] = (byte >> (7 - j)) & 1;
  }
  key.pattern = TiePattern(std::move(bits));
  table.rows.reserve(static_cast<std::size_t>(table.k_max) + 1);
  for (int k = 0; k <= table.k_max; ++k) {
    const auto count = get<std::uint64_t>(in);
    std::vector<BigInt> coeffs;
    coeffs.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) coeffs.push_back(get_bigint(in));
    table.rows.emplace_back(std::move(coeffs));
  }
  if (key_out) *key_out = std::move(key);
  return table;
}

std::string table_file_name(const TableKey& key) {
  return "N" + std::to_string(key.total) + "-n" + std::to_string(key.n1) + "-" +
         pattern_hex(key.pattern) + ".xrt";
}

TableCache::TableCache(std::optional<std::filesystem::path> directory)
    : directory_(std::move(directory)) {
  if (directory_) std::filesystem::create_directories(*directory_);
}

std::shared_ptr<const CoeffTable> TableCache::table_for(const RankMultiset& ranks, int n1) {
  const int n = ranks.size();
  const int k_max = std::max(n1, n - n1);
  TiePattern pattern;
  try {
    pattern = ranks_to_pattern(ranks);
  } catch (const InputError&) {
    return std::make_shared<const CoeffTable>(euler_expand(ranks, k_max));
  }
  TableKey key{n, n1, std::move(pattern)};
  {
    std::shared_lock lock(mutex_);
    if (auto it = tables_.find(key); it != tables_.end()) {
      ++hits_;
      return it->second;
    }
  }

  std::shared_ptr<const CoeffTable> table;
  if (directory_) {
    const auto path = *directory_ / table_file_name(key);
    if (std::ifstream in(path, std::ios::binary); in) {
      TableKey stored;
      auto loaded = read_table(in, &stored);
      if (stored == key && loaded.k_max >= std::min(n1, n - n1)) {
        table = std::make_shared<const CoeffTable>(std::move(loaded));
      }
    }
  }
  const bool computed = !table;
  if (computed) table = std::make_shared<const CoeffTable>(euler_expand(ranks, k_max));

  if (computed && directory_) {
    const auto path = *directory_ / table_file_name(key);
    std::ostringstream tag;
    tag << std::this_thread::get_id();
    const auto tmp = path.string() + ".tmp" + tag.str();
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      write_table(out, key, *table);
      if (!out) throw Error("failed to write cache file " + tmp);
    }
    std::filesystem::rename(tmp, path);
  }

  std::unique_lock lock(mutex_);
  auto [it, inserted] = tables_.emplace(std::move(key), table);
  if (computed) {
    ++misses_;
  } else {
    ++hits_;
  }
  return it->second;
}

ExactDist TableCache::dist(const RankMultiset& ranks, int n1) {
  return dist_from_table(*table_for(ranks, n1), n1);
}

std::size_t TableCache::hits() const { return hits_.load(); }

std::size_t TableCache::misses() const { return misses_.load(); }

}  // namespace exactrank
