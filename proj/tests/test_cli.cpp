// Copyright 2026 The qmeasure Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <array>
#include <cstdio>
#include <memory>
#include <string>

#include <sys/wait.h>

#include "doctest.h"

namespace {

struct Outcome {
    int code;
    std::string out;
};

Outcome cli(const std::string &args) {
    const std::string cmd = std::string(QMEASURE_CLI) + " " + args + " 2>&1";
    std::unique_ptr<FILE, int (*)(FILE *)> pipe(popen(cmd.c_str(), "r"), pclose);
    REQUIRE(pipe);
    std::string out;
    std::array<char, 4096> buf{};
    while (auto n = std::fread(buf.data(), 1, buf.size(), pipe.get()))
        out.append(buf.data(), n);
    const int status = pclose(pipe.release());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string data(const char *name) {
    return std::string(QMEASURE_TEST_DATA) + "/" + name;
}

} // namespace

TEST_CASE("presets listing") {
    const auto r = cli("presets");
    CHECK(r.code == 0);
    CHECK(r.out.find("epr_bohm") != std::string::npos);
    CHECK(r.out.find("telepathy_born") != std::string::npos);
    const auto show = cli("presets --show stern_gerlach");
    CHECK(show.code == 0);
    CHECK(show.out.find("kind = stern_gerlach") != std::string::npos);
    CHECK(cli("presets --show nonesuch").code == 2);
}

TEST_CASE("run presets and files") {
    const auto nb = cli("run telepathy_nonborn --format records");
    CHECK(nb.code == 0);
    CHECK(nb.out.find("telepathy_nonborn.signaling_gap=0.1196439") != std::string::npos);
    CHECK(cli("run telepathy_nonborn --format records").out == nb.out);
    CHECK(cli("run telepathy_nonborn --format records --seed 7").out != nb.out);

    const auto table = cli("run epr_bohm");
    CHECK(table.code == 0);
    CHECK(table.out.find("scenario: epr_bohm") != std::string::npos);

    const auto file = cli("run " + data("degenerate_qutrit.scn"));
    CHECK(file.code == 0);
    CHECK(file.out.find("degenerate_qutrit") != std::string::npos);
}

TEST_CASE("input errors exit with code 2") {
    const auto unknown = cli("run " + data("unknown_field.scn"));
    CHECK(unknown.code == 2);
    CHECK(unknown.out.find("pointer_size") != std::string::npos);
    CHECK(unknown.out.find("line 6") != std::string::npos);
    CHECK(cli("run no_such_preset").code == 2);
    CHECK(cli("run epr_bohm --format xml").code == 2);
    CHECK(cli("verify --dims-limit 1").code == 2);
    CHECK(cli("frobnicate").code == 2);
}

TEST_CASE("invalid physics exits with code 3") {
    const auto bad = cli("run " + data("corrupted_projectors.scn"));
    CHECK(bad.code == 3);
    CHECK(bad.out.find("InvalidProjectorFamily") != std::string::npos);
}

TEST_CASE("small verify run") {
    const auto r = cli("verify --trials 8 --dims-limit 3 --seed 5");
    CHECK(r.code == 0);
    CHECK(r.out.find("FAIL") == std::string::npos);
    CHECK(r.out.find("no_signaling_born") != std::string::npos);
}
