#include "polargrass/cache.hpp"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace polargrass {

namespace {

constexpr char kMagic[] = "PGCACHE1";

std::uint64_t fnv(const void* data, size_t len) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = 1469598103934665603ull;
    for (size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

void put_u64(std::ostream& os, std::uint64_t v) {
    unsigned char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
    os.write(reinterpret_cast<const char*>(buf), 8);
}

std::uint64_t get_u64(std::istream& is) {
    unsigned char buf[8];
    is.read(reinterpret_cast<char*>(buf), 8);
    if (!is) throw Error("cache file truncated");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
    return v;
}

}  // namespace

std::string cache_dir() {
    const char* env = std::getenv("POLARGRASS_CACHE");
    return env ? std::string(env) : std::string();
}

std::string default_cache_path(const PolarModel& m) {
    std::string dir = cache_dir();
    if (dir.empty()) throw Error("POLARGRASS_CACHE is not set");
    std::string name = m.descriptor();
    for (char& c : name)
        if (!isalnum(static_cast<unsigned char>(c))) c = '_';
    std::ostringstream os;
    os << dir << "/" << name << "_" << std::hex << m.field().hash() << ".pgc";
    return os.str();
}

void save_cache(const PolarModel& m, const std::string& path, const std::vector<int>& ks) {
    nlohmann::json manifest;
    manifest["version"] = kCacheVersion;
    manifest["space"] = m.descriptor();
    manifest["field"] = m.field().descriptor();
    manifest["field_hash"] = m.field().hash();
    manifest["n"] = m.rank();
    manifest["d"] = m.defect();
    manifest["num_points"] = m.num_points();
    nlohmann::json tables = nlohmann::json::array();
    for (int k : ks) {
        const SubspaceTable& t = m.sk(k);
        nlohmann::json jt;
        jt["k"] = k;
        jt["count"] = t.keys.size();
        jt["hash"] = fnv(t.keys.data(), t.keys.size() * sizeof(SubKey));
        tables.push_back(jt);
    }
    manifest["tables"] = tables;

    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw Error("cannot write cache file " + path);
    os.write(kMagic, 8);
    std::string mj = manifest.dump();
    put_u64(os, mj.size());
    os.write(mj.data(), static_cast<std::streamsize>(mj.size()));
    for (int k : ks) {
        const SubspaceTable& t = m.sk(k);
        os.write(reinterpret_cast<const char*>(t.keys.data()),
                 static_cast<std::streamsize>(t.keys.size() * sizeof(SubKey)));
    }
    if (!os) throw Error("failed writing cache file " + path);
}

std::vector<int> load_cache(const PolarModel& m, const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error("cannot open cache file " + path);
    char magic[8];
    is.read(magic, 8);
    if (!is || std::memcmp(magic, kMagic, 8) != 0) throw Error("not a polargrass cache file: " + path);
    std::uint64_t mlen = get_u64(is);
    if (mlen > (1ull << 20)) throw Error("cache manifest too large (corrupted?)");
    std::string mj(mlen, '\0');
    is.read(mj.data(), static_cast<std::streamsize>(mlen));
    if (!is) throw Error("cache file truncated");
    nlohmann::json manifest;
    try {
        manifest = nlohmann::json::parse(mj);
    } catch (const std::exception&) {
        throw Error("cache manifest is not valid JSON (corrupted?)");
    }
    if (manifest.value("version", "") != kCacheVersion)
        throw Error("cache version mismatch: rebuild with `polargrass build`");
    if (manifest.value("space", "") != m.descriptor())
        throw Error("cache is for a different space: " + manifest.value("space", ""));
    if (manifest.value("field_hash", 0ull) != m.field().hash())
        throw Error("cache field/modulus hash mismatch: rebuild with `polargrass build`");

    std::vector<int> loaded;
    for (const auto& jt : manifest["tables"]) {
        int k = jt["k"].get<int>();
        size_t count = jt["count"].get<size_t>();
        std::vector<SubKey> keys(count);
        is.read(reinterpret_cast<char*>(keys.data()),
                static_cast<std::streamsize>(count * sizeof(SubKey)));
        if (!is) throw Error("cache file truncated");
        if (fnv(keys.data(), count * sizeof(SubKey)) != jt["hash"].get<std::uint64_t>())
            throw Error("cache blob hash mismatch (corrupted file)");
        m.adopt_sk(k, std::move(keys));
        loaded.push_back(k);
    }
    return loaded;
}

}  // namespace polargrass
