#include "doctest.h"
#include "testutil.hpp"

#include "bvred/verify.hpp"

#include <filesystem>
#include <fstream>

using namespace bvred;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::string corpusDir() {
    for (const char* c : {"data/corpus", "../data/corpus", "../../data/corpus"})
        if (std::filesystem::exists(c))
            return c;
    return "data/corpus";
}

} // namespace

TEST_CASE("every corpus file parses and validates") {
    size_t count = 0;
    for (const auto& e : std::filesystem::directory_iterator(corpusDir())) {
        if (e.path().extension() != ".bv")
            continue;
        auto r = parseSystem(slurp(e.path().string()));
        INFO(e.path().string());
        for (const auto& err : r.errors)
            INFO(err.message);
        CHECK(r.ok());
        ++count;
    }
    CHECK(count >= 6);
}

TEST_CASE("invalid fixtures are rejected with the violated identity") {
    auto dir = corpusDir();
    auto fixtures = std::filesystem::path(dir).parent_path().parent_path() /
                    "tests" / "fixtures" / "invalid";
    std::map<std::string, std::string> expect = {
        {"noninvariant.bv", "invariance violated"},
        {"jacobi.bv", "Jacobi"},
        {"character.bv", "character condition violated"},
        {"oneform.bv", "not closed"},
    };
    for (const auto& [file, needle] : expect) {
        auto r = parseSystem(slurp((fixtures / file).string()));
        INFO(file);
        CHECK(!r.ok());
        bool found = false;
        for (const auto& err : r.errors)
            found = found || err.message.find(needle) != std::string::npos;
        CHECK(found);
    }
}

TEST_CASE("thm-a driver passes on the abelian corpus file") {
    auto sf = parseSystemOrThrow(slurp(corpusDir() + std::string("/abelian_weight.bv")));
    auto res = verifyThmA(sf, true);
    std::string lastNote = res.notes.empty() ? "" : res.notes.back();
    INFO(lastNote);
    CHECK(res.status == "pass");
}

TEST_CASE("twisted driver matches the classical elimination oracle") {
    auto sf = parseSystemOrThrow(slurp(corpusDir() + std::string("/twisted_gl1.bv")));
    auto res = verifyTwisted(sf);
    std::string firstNote = res.notes.empty() ? "" : res.notes.front();
    INFO(firstNote);
    CHECK(res.status == "pass");
}

TEST_CASE("determinism under permuted declarations") {
    auto sf = parseSystemOrThrow(slurp(corpusDir() + std::string("/abelian_weight.bv")));
    auto det = determinismCheck(sf, {"check", "moment-maps", "thm-a"});
    INFO(det.detail);
    CHECK(det.identical);
}
