#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

/// Scratch directory removed at exit.
class Scratch {
public:
    Scratch() : dir_(fs::temp_directory_path() / ("nashforge_cli_" + std::to_string(::getpid()))) {
        fs::create_directories(dir_);
    }
    ~Scratch() {
        std::error_code ec;
        fs::remove_all(dir_, ec);
    }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }
    std::string write(const std::string& name, const std::string& text) const {
        std::ofstream(path(name)) << text;
        return path(name);
    }

private:
    fs::path dir_;
};

const Scratch& scratch() {
    static const Scratch s;
    return s;
}

Run run(const std::string& args) {
    const std::string cmd = std::string(NASHFORGE_CLI_PATH) + " " + args + " 2>/dev/null";
    Run r;
    FILE* pipe = ::popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    std::size_t n = 0;
    while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0)
        r.out.append(buf, n);
    const int status = ::pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json load(const std::string& path) { return json::parse(read_file(path)); }

const char* one_minus_json =
    R"({"schema":"nashforge/v1","k":1,"gates":[{"op":"input","i":0},{"op":"const","v":"1"},)"
    R"({"op":"mulc","c":"-1","a":0},{"op":"add","a":1,"b":2}],"outputs":[3]})";

const char* swap_json =
    R"({"schema":"nashforge/v1","k":2,"gates":[{"op":"input","i":0},{"op":"input","i":1}],"outputs":[1,0]})";

const char* double_json =
    R"({"schema":"nashforge/v1","k":1,"gates":[{"op":"input","i":0},{"op":"mulc","c":"2","a":0}],"outputs":[1]})";

std::string worked() { return scratch().write("f.json", one_minus_json); }

json strings(std::initializer_list<const char*> v) {
    json out = json::array();
    for (const char* s : v)
        out.push_back(s);
    return out;
}

} // namespace

TEST_CASE("reduce reproduces the worked game") {
    const std::string out = scratch().path("g.json");
    REQUIRE(run("reduce " + worked() + " -t game -o " + out).code == 0);
    const json g = load(out);
    CHECK(g["rows"] == 3);
    CHECK(g["A"] == json::array({strings({"1/2", "1/2", "0"}), strings({"0", "1", "0"}), strings({"0", "0", "1"})}));
    CHECK(g["B"] ==
          json::array({strings({"-1/2", "-1/2", "0"}), strings({"1", "-1", "0"}), strings({"1", "2", "1"})}));
    CHECK(g["meta"]["kind"] == "rank_k_plus_1");

    const std::string s = scratch().path("s.json");
    REQUIRE(run("reduce " + worked() + " -t symmetric -o " + s).code == 0);
    CHECK(load(s)["A"] == json::array({strings({"-1", "1", "1"}), strings({"-1", "-1", "2"}), strings({"0", "0", "1"})}));

    const std::string lp = scratch().path("lp.json");
    REQUIRE(run("reduce " + worked() + " -t lp -o " + lp).code == 0);
    CHECK(load(lp)["c"] == strings({"2", "1"}));
}

TEST_CASE("solve and eval on the worked instance") {
    const std::string g = scratch().path("g2.json");
    REQUIRE(run("reduce " + worked() + " -t game -o " + g).code == 0);
    const Run e = run("solve " + g);
    REQUIRE(e.code == 0);
    const json r = json::parse(e.out);
    REQUIRE(r["equilibria"].size() == 1);
    CHECK(r["equilibria"][0]["x"] == strings({"2/5", "1/5"}));
    CHECK(r["equilibria"][0]["s"] == "2/5");
    CHECK(r["equilibria"][0]["lambda"] == strings({"1/2"}));

    const Run lh = run("solve " + g + " --method lh --label 1");
    REQUIRE(lh.code == 0);
    CHECK(json::parse(lh.out)["equilibria"][0]["x"] == strings({"2/5", "1/5"}));

    const std::string s = scratch().path("s2.json");
    REQUIRE(run("reduce " + worked() + " -t symmetric -o " + s).code == 0);
    const Run sym = run("solve " + s + " --symmetric");
    REQUIRE(sym.code == 0);
    CHECK(json::parse(sym.out)["equilibria"][0]["lambda"] == strings({"1/2"}));

    const Run at_half = run("eval " + worked() + " --lambda 1/2");
    REQUIRE(at_half.code == 0);
    CHECK(json::parse(at_half.out)["fixed_point"] == true);
    CHECK(json::parse(run("eval " + worked() + " --lambda 1/3").out)["outputs"] == strings({"2/3"}));
}

TEST_CASE("verify passes on known circuits") {
    const std::string sw = scratch().write("swap.json", swap_json);
    const std::string dbl = scratch().write("double.json", double_json);
    for (const auto& c : {worked(), sw, dbl}) {
        const Run rt = run("verify " + c + " --mode roundtrip");
        CHECK(rt.code == 0);
        CHECK(json::parse(rt.out)["status"] == "PASS");
        CHECK(run("verify " + c + " --mode lemmas --semimonotone-trials 200").code == 0);
    }
    const std::string g = scratch().path("g3.json");
    REQUIRE(run("reduce " + worked() + " -t game -o " + g).code == 0);
    CHECK(run("verify " + g + " --circuit " + worked()).code == 0);
}

TEST_CASE("outputs are byte-identical across runs") {
    for (const char* target : {"lp", "lcp", "direct-lcp", "game", "symmetric", "imitation"}) {
        const std::string a = scratch().path(std::string("a_") + target + ".json");
        const std::string b = scratch().path(std::string("b_") + target + ".json");
        REQUIRE(run("reduce " + worked() + " -t " + target + " -o " + a).code == 0);
        REQUIRE(run("reduce " + worked() + " -t " + target + " -o " + b).code == 0);
        CHECK(read_file(a) == read_file(b));
    }
    const Run v1 = run("verify " + worked() + " --mode lemmas --seed 7 --semimonotone-trials 100");
    const Run v2 = run("verify " + worked() + " --mode lemmas --seed 7 --semimonotone-trials 100");
    CHECK(v1.out == v2.out);
}

TEST_CASE("invalid input exits with code 2") {
    CHECK(run("eval " + scratch().path("missing.json") + " --lambda 1").code == 2);
    CHECK(run("eval " + scratch().write("junk.json", "{not json") + " --lambda 1").code == 2);
    CHECK(run("eval " + scratch().write("nogates.json", R"({"schema":"nashforge/v1","k":1,"outputs":[0]})") +
              " --lambda 1")
              .code == 2);
    CHECK(run("eval " + worked() + " --lambda 1/0").code == 2);
    CHECK(run("eval " + worked() + " --lambda 1,2").code == 2);
    const std::string fwd = scratch().write(
        "fwd.json", R"({"schema":"nashforge/v1","k":1,"gates":[{"op":"input","i":0},{"op":"add","a":0,"b":5}],"outputs":[1]})");
    CHECK(run("reduce " + fwd + " -t game -o " + scratch().path("x.json")).code == 2);
    CHECK(run("reduce " + worked() + " -t bogus -o " + scratch().path("x.json")).code != 0);
}

TEST_CASE("corrupted games and profiles are rejected") {
    const std::string g = scratch().path("g4.json");
    REQUIRE(run("reduce " + worked() + " -t game -o " + g).code == 0);
    json bad = load(g);
    bad["B"][1][0] = "3";
    const std::string bg = scratch().write("bad_game.json", bad.dump());
    CHECK(run("verify " + bg + " --circuit " + worked()).code != 0);

    const std::string good = scratch().write("p.json", R"({"x":["2/5","1/5"],"s":"2/5","y":["1/3","1/3"],"t":"1/3"})");
    CHECK(run("verify " + g + " --profile " + good).code == 0);
    const std::string off = scratch().write("p2.json", R"({"x":["1/2","1/5"],"s":"3/10","y":["1/3","1/3"],"t":"1/3"})");
    const Run r = run("verify " + g + " --profile " + off);
    CHECK(r.code == 2);
    CHECK(json::parse(r.out)["status"] == "FAIL");
}

TEST_CASE("compile an example coloring and verify the approximate fixed point") {
    const std::string b = scratch().path("b22.json");
    REQUIRE(run("oracle --example-k 2 --example-n 2 -o " + b).code == 0);
    const Run o = run("oracle " + b);
    CHECK(o.code == 0);
    CHECK_FALSE(json::parse(o.out)["checks"].empty());

    const std::string c = scratch().path("c22.json");
    const std::string meta = scratch().path("c22.meta.json");
    const Run comp = run("compile " + b + " -o " + c + " --meta " + meta + " --check-grid");
    CHECK(comp.code == 0);
    CHECK(json::parse(comp.out)["status"] == "PASS");
    CHECK(load(meta)["L"] == 32);

    const Run ap = run("verify " + c + " --mode approx --meta " + meta);
    CHECK(ap.code == 0);
    CHECK(json::parse(ap.out)["status"] == "PASS");

    const std::string bc = scratch().write(
        "bc.json", R"({"schema":"nashforge/v1","k":2,"n":2,"gates":[{"op":"const","v":1},{"op":"const","v":0}],"outputs":[0,1,1,1]})");
    CHECK(run("compile " + bc + " -o " + scratch().path("bcc.json")).code == 2);
}
