#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "finpot/cli.hpp"
#include "finpot/random_instances.hpp"

using namespace finpot;

namespace {

struct Outcome {
    int code;
    std::string out, err;
    Json json() const { return Json::parse(out); }
};

Outcome run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

const std::string kProjector = R"({"entries":[[0,0,"1"]]})";

// Sets an environment variable for the lifetime of the object.
struct EnvGuard {
    std::string name;
    EnvGuard(std::string n, const std::string& v) : name(std::move(n)) { setenv(name.c_str(), v.c_str(), 1); }
    ~EnvGuard() { unsetenv(name.c_str()); }
};

}  // namespace

TEST(Cli, PinnedOutputs) {
    Outcome d = run({"det", "--op", kProjector});
    EXPECT_EQ(d.code, 0);
    EXPECT_EQ(d.json(), Json::parse(R"({"value":"2"})"));

    Outcome r = run({"residue", "--f", "1/t", "--g", "t", "--place", "t"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.json(), Json::parse(R"({"value":"1"})"));

    Outcome rec = run({"reciprocity", "--f", "t", "--g", "1/(t-1)"});
    EXPECT_EQ(rec.code, 0);
    EXPECT_EQ(rec.json(), Json::parse(R"j({"sum":"0","product":"1 + O(z^8)"})j"));
}

TEST(Cli, ExitCodes) {
    Outcome bad_verb = run({"frobnicate"});
    EXPECT_EQ(bad_verb.code, 2);
    EXPECT_EQ(bad_verb.json()["error"], "parse_error");
    EXPECT_NE(bad_verb.err.find("det"), std::string::npos) << "usage text lists the verbs";

    EXPECT_EQ(run({"det", "--op", R"({"entries":[[0,0,"1/0"]]})"}).code, 2);
    EXPECT_EQ(run({"det", "--op", "{not json"}).code, 2);
    EXPECT_EQ(run({"residue", "--f", "1/(t", "--g", "t"}).code, 2);
    EXPECT_EQ(run({"exterior", "--op", kProjector}).code, 2);  // --r is required

    Outcome singular = run({"invert", "--op", R"({"entries":[[0,0,"-1"]]})"});
    EXPECT_EQ(singular.code, 1);
    Json e = singular.json();  // error objects go to stdout, usage to stderr
    EXPECT_EQ(e["error"], "not_invertible");
    EXPECT_TRUE(e.contains("detail"));

    Outcome reducible = run({"residue", "--f", "1/t", "--g", "t", "--place", "t^2-1"});
    EXPECT_EQ(reducible.code, 1);
    EXPECT_EQ(reducible.json()["error"], "precondition");

    Outcome tail = run({"det", "--op", R"({"entries":[],"tail":{"kind":"jordan_blocks","block_size":2,"start":0,"coeffs":["1","1"]}})"});
    EXPECT_EQ(tail.code, 1);
    EXPECT_EQ(tail.json()["error"], "certificate_failure");

    EXPECT_EQ(run({"det", "--help"}).code, 0);
}

TEST(Cli, OperatorFromFile) {
    std::string path = ::testing::TempDir() + "finpot_cli_op.json";
    {
        std::ofstream f(path);
        f << R"({"entries":[[0,0,"1"],[1,1,"2"]]})";
    }
    EXPECT_EQ(run({"det", "--op-file", path}).json()["value"], "6");
    EXPECT_EQ(run({"det", "--op", path}).json()["value"], "6");
    EXPECT_EQ(run({"det", "--op-file", path + ".missing"}).code, 2);
}

TEST(Cli, EveryVerbRuns) {
    const std::string diag = R"({"entries":[[0,0,"1"],[1,1,"2"]]})";
    EXPECT_EQ(run({"trace", "--op", diag}).json()["value"], "3");
    EXPECT_EQ(run({"exterior", "--op", diag, "--r", "2"}).json()["value"], "2");
    EXPECT_EQ(run({"detpoly", "--op", diag}).json()["value"]["coeffs"], Json::parse(R"(["1","3","2"])"));
    Json ast = run({"ast", "--op", diag}).json();
    EXPECT_EQ(ast["core_dim"], 2);
    EXPECT_EQ(ast["nil_dim"], 0);
    EXPECT_EQ(run({"invert", "--op", kProjector}).json()["psi"]["entries"], Json::parse(R"([[0,0,"-1/2"]])"));
    EXPECT_EQ(run({"ps-series", "--op", diag}).json()["alpha"], Json::parse(R"(["1","3","4"])"));
    EXPECT_EQ(run({"logdet", "--op", kProjector, "--prec", "5"}).code, 0);
    EXPECT_EQ(run({"regdet", "--op", kProjector, "--m", "2"}).code, 0);
    Json ex = run({"exp", "--op", kProjector, "--weight", "2", "--prec", "6"}).json();
    EXPECT_EQ(ex["trace"], "1");
    EXPECT_EQ(run({"zassenhaus", "--op", R"({"entries":[[1,0,"1"]]})", "--op2", R"({"entries":[[0,1,"1"]]})"})
                  .json()["holds"],
              true);
    Json fam = run({"infprod", "--family", R"([{"weight":2,"op":{"entries":[[0,0,"3"]]}}])", "--compat-m", "2",
                    "--prec", "6"})
                   .json();
    EXPECT_EQ(series_from_json(fam["value"]), series_exp(LaurentSeries<Rational>::monomial(3, 2, 6, "z")));
    EXPECT_EQ(run({"residue", "--f", "1/t^2", "--g", "t^2", "--route", "tate"}).json()["value"], "2");
    // conjugate residues of dt/(t^2+1) cancel; t dt/(t^2+1) has 1/2 at each root
    EXPECT_EQ(run({"residue", "--f", "1/(t^2+1)", "--g", "t", "--place", "t^2+1"}).json()["value"], "0");
    EXPECT_EQ(run({"residue", "--f", "t/(t^2+1)", "--g", "t", "--place", "t^2+1"}).json()["value"], "1");
    EXPECT_EQ(run({"cocycle", "--f", "1/t", "--g", "t", "--route", "operator"}).json(),
              run({"cocycle", "--f", "1/t", "--g", "t"}).json());
    EXPECT_EQ(run({"pairing", "--f", "1/t", "--g", "t", "--prec", "5"}).json()["value"], "1 + z^2 + 1/2*z^4 + O(z^5)");
    Json sw = run({"sw-pairing", "--f", "z", "--ftilde", "z^-1", "--T", "20"}).json();
    EXPECT_EQ(sw["exponent"], "1");
    EXPECT_EQ(sw["matches_residue"], true);
    EXPECT_LT(std::stod(sw["error"].get<std::string>()), 1e-8);
    EXPECT_EQ(run({"det", "--op", kProjector, "--format", "text"}).out, "value: 2\n");
}

TEST(Cli, PrecisionFromEnvironment) {
    std::string def = run({"logdet", "--op", kProjector}).out;
    {
        EnvGuard g("FINPOT_PREC", "6");
        Json j = run({"regdet", "--op", kProjector, "--m", "2"}).json()["value"];
        EXPECT_EQ(j["prec"], 6);
        EXPECT_EQ(series_from_json(j).coeff(5), Rational(-1, 30));
        EXPECT_NE(run({"logdet", "--op", kProjector}).out, def);
        // explicit flags win
        EXPECT_EQ(run({"logdet", "--op", kProjector, "--prec", "4"}).json()["value"]["prec"], 4);
    }
    {
        EnvGuard g("FINPOT_PREC", "banana");
        EXPECT_EQ(run({"logdet", "--op", kProjector}).code, 2);
    }
}

TEST(Cli, DeterministicOutput) {
    RandomInstances gen(101);
    for (int it = 0; it < 20; ++it) {
        std::string op = to_json(gen.finite_potent()).dump();
        for (const char* verb : {"det", "ast", "detpoly", "logdet"}) {
            Outcome a = run({verb, "--op", op}), b = run({verb, "--op", op});
            EXPECT_EQ(a.out, b.out);
            EXPECT_EQ(a.code, b.code);
        }
    }
}

TEST(Cli, OutputsRoundTrip) {
    RandomInstances gen(102);
    for (int it = 0; it < 30; ++it) {
        FinitePotentOperator<Rational> phi = gen.finite_potent();
        std::string op = to_json(phi).dump();
        Rational d = parse_rational(run({"det", "--op", op}).json()["value"].get<std::string>());
        EXPECT_EQ(d, det_one_plus(phi));
        EXPECT_EQ(series_from_json(run({"logdet", "--op", op, "--prec", "6"}).json()["value"]), log_det_series(phi, 6));
        if (d != 0) {
            FinitePotentOperator<Rational> psi = operator_from_json(run({"invert", "--op", op}).json()["psi"]);
            EXPECT_TRUE(op_equal(psi, invert_one_plus(phi)));
        }
        RationalFunction f = gen.rational_function(), g = gen.rational_function();
        Json c = run({"cocycle", "--f", f.to_string(), "--g", g.to_string(), "--place", "t"}).json();
        EXPECT_EQ(parse_series_text(c["value"].get<std::string>()), cocycle(f, g, Place::point(0)));
    }
}

TEST(Cli, SelftestPasses) {
    Outcome s = run({"selftest", "--count", "60", "--seed", "7"});
    EXPECT_EQ(s.code, 0);
    EXPECT_EQ(s.json()["failures"], 0);
    EXPECT_EQ(s.json()["operators"], 60);
}
