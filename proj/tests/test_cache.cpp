#include <cstdio>
#include <fstream>

#include "doctest.h"
#include "polargrass/cache.hpp"

using namespace polargrass;

TEST_CASE("cache round trip reproduces identical tables") {
    PolarModel m(FormSpec::standard("Qparab(3,2)"));
    m.sk(2);
    m.sk(3);
    std::string path = "/tmp/pg_test_cache.pgc";
    save_cache(m, path, {1, 2, 3});

    PolarModel m2(FormSpec::standard("Qparab(3,2)"));
    auto loaded = load_cache(m2, path);
    CHECK(loaded == std::vector<int>{1, 2, 3});
    CHECK(m2.sk(2).keys == m.sk(2).keys);
    CHECK(m2.sk(3).keys == m.sk(3).keys);

    // determinism: a fresh build gives the same IDs as the cached load
    PolarModel m3(FormSpec::standard("Qparab(3,2)"));
    CHECK(m3.sk(2).keys == m2.sk(2).keys);
    std::remove(path.c_str());
}

TEST_CASE("corrupted cache is refused") {
    PolarModel m(FormSpec::standard("Qplus(3,2)"));
    m.sk(2);
    std::string path = "/tmp/pg_test_cache_bad.pgc";
    save_cache(m, path, {2});
    {
        std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(-5, std::ios::end);
        char junk = 0x5a;
        f.write(&junk, 1);
    }
    PolarModel m2(FormSpec::standard("Qplus(3,2)"));
    CHECK_THROWS_WITH_AS(load_cache(m2, path), doctest::Contains("hash mismatch"), Error);
    std::remove(path.c_str());
}

TEST_CASE("cache for a different space or version is refused") {
    PolarModel m(FormSpec::standard("Qplus(3,2)"));
    m.sk(2);
    std::string path = "/tmp/pg_test_cache_other.pgc";
    save_cache(m, path, {2});
    PolarModel other(FormSpec::standard("Qparab(3,2)"));
    CHECK_THROWS_WITH_AS(load_cache(other, path), doctest::Contains("different space"), Error);

    // stale version marker
    {
        std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(8 + 8 + 13, std::ios::beg);  // inside the version string
        char junk = '0';
        f.write(&junk, 1);
    }
    PolarModel m2(FormSpec::standard("Qplus(3,2)"));
    Error caught("");
    bool threw = false;
    try {
        load_cache(m2, path);
    } catch (const Error& e) {
        threw = true;
        caught = e;
    }
    CHECK(threw);
    std::remove(path.c_str());
}

TEST_CASE("not a cache file") {
    std::string path = "/tmp/pg_test_cache_junk.pgc";
    std::ofstream(path) << "hello";
    PolarModel m(FormSpec::standard("Qplus(3,2)"));
    CHECK_THROWS_AS(load_cache(m, path), Error);
    std::remove(path.c_str());
}
