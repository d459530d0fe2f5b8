#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "nmq/oracle.hpp"

namespace nmq {

namespace {

constexpr char kMagic[8] = {'N', 'M', 'Q', 'S', 'E', 'I', 'G', '\0'};

template <class T>
void put(std::ostream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
bool get(std::istream& is, T& v) {
    return static_cast<bool>(is.read(reinterpret_cast<char*>(&v), sizeof v));
}

std::uint64_t sector_hash(const SectorBasis& sector) {
    std::uint64_t h = 1469598103934665603ull;
    for (const auto& s : sector.states()) {
        for (unsigned char b : SectorBasis::key(s)) {
            h ^= b;
            h *= 1099511628211ull;
        }
    }
    return h;
}

}  // namespace

std::string checkpoint_path(const std::string& dir, const BathSpec& bath, const SectorBasis& sector) {
    std::ostringstream os;
    os << "sector_" << std::hex << std::setw(16) << std::setfill('0') << bath.hash() << '_' << std::dec
       << sector.excitation() << '_' << std::hex << std::setw(16) << sector_hash(sector) << ".eig";
    return (std::filesystem::path(dir) / os.str()).string();
}

void save_sector_checkpoint(const std::string& path, const BathSpec& bath, const SectorBasis& sector,
                            const linalg::SymmetricEigen& eig) {
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    const std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw Error("cannot write checkpoint " + tmp);
        os.write(kMagic, sizeof kMagic);
        put(os, kCheckpointVersion);
        put(os, bath.hash());
        put(os, sector.omega0());
        put(os, static_cast<std::uint64_t>(sector.dim()));
        put(os, static_cast<std::uint64_t>(bath.size()));
        for (const auto& s : sector.states()) {
            put(os, static_cast<std::uint8_t>(s.qubit));
            os.write(reinterpret_cast<const char*>(s.occ.data()), static_cast<std::streamsize>(s.occ.size()));
        }
        os.write(reinterpret_cast<const char*>(eig.values.data()),
                 static_cast<std::streamsize>(eig.values.size() * sizeof(double)));
        os.write(reinterpret_cast<const char*>(eig.vectors.data()),
                 static_cast<std::streamsize>(eig.vectors.size() * sizeof(double)));
        if (!os) throw Error("short write on checkpoint " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

std::optional<linalg::SymmetricEigen> load_sector_checkpoint(const std::string& path, const BathSpec& bath,
                                                             const SectorBasis& sector) {
    std::ifstream is(path, std::ios::binary);
    if (!is) return std::nullopt;
    char magic[8];
    if (!is.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof magic) != 0) return std::nullopt;
    std::uint32_t version = 0;
    std::uint64_t bh = 0, dim = 0, modes = 0;
    double w0 = 0.0;
    if (!get(is, version) || version != kCheckpointVersion) return std::nullopt;
    if (!get(is, bh) || bh != bath.hash()) return std::nullopt;
    if (!get(is, w0) || w0 != sector.omega0()) return std::nullopt;
    if (!get(is, dim) || dim != sector.dim()) return std::nullopt;
    if (!get(is, modes) || modes != bath.size()) return std::nullopt;
    SectorState s;
    s.occ.resize(modes);
    for (std::uint64_t i = 0; i < dim; ++i) {
        std::uint8_t q = 0;
        if (!get(is, q)) return std::nullopt;
        s.qubit = q;
        if (!is.read(reinterpret_cast<char*>(s.occ.data()), static_cast<std::streamsize>(modes))) return std::nullopt;
        const auto& ref = sector.states()[i];
        if (ref.qubit != s.qubit || ref.occ != s.occ) return std::nullopt;
    }
    linalg::SymmetricEigen eig;
    eig.values.resize(static_cast<Eigen::Index>(dim));
    eig.vectors.resize(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    if (!is.read(reinterpret_cast<char*>(eig.values.data()), static_cast<std::streamsize>(dim * sizeof(double))))
        return std::nullopt;
    if (!is.read(reinterpret_cast<char*>(eig.vectors.data()),
                 static_cast<std::streamsize>(dim * dim * sizeof(double))))
        return std::nullopt;
    return eig;
}

}  // namespace nmq
