#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "slampoint/csv.hpp"
#include "support/test_util.hpp"

using namespace slampoint;
using testsupport::fixture_path;
using testsupport::slurp;

TEST_CASE("read_table parses a plain file") {
    std::istringstream in("a,b,c\n1,2,3\n4,5,6\n");
    auto t = csv::read_table(in);
    CHECK(t.columns == std::vector<std::string>({"a", "b", "c"}));
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[0] == std::vector<std::string>({"1", "2", "3"}));
    CHECK(t.rows[1] == std::vector<std::string>({"4", "5", "6"}));
    CHECK(t.find("b") == 1);
    CHECK(t.find("missing") == csv::Table::npos);
}

TEST_CASE("read_table handles the RFC-4180 edge fixture") {
    auto t = csv::read_table_file(fixture_path("edge.csv"));
    CHECK(t.columns == std::vector<std::string>({"name", "comment", "score"}));
    REQUIRE(t.rows.size() == 6);
    CHECK(t.rows[0] == std::vector<std::string>({"plain", "no quotes here", "1"}));
    CHECK(t.rows[1] == std::vector<std::string>({"quoted", "has, a comma", "2"}));
    CHECK(t.rows[2] == std::vector<std::string>({"emb\"edded", "say \"hi\"", "3"}));
    CHECK(t.rows[3][0] == "multi\nline");
    CHECK(t.rows[3][1] == "crlf\r\ninside");  // quoted CRLF is content, kept verbatim
    CHECK(t.rows[4] == std::vector<std::string>({"trail", "", "5"}));
    CHECK(t.rows[5] == std::vector<std::string>({"last", "no final newline", "6"}));
}

TEST_CASE("arity mismatches raise MalformedRow with the line number") {
    std::istringstream shrt("a,b\n1\n");
    CHECK_THROWS_AS(csv::read_table(shrt), csv::MalformedRow);
    std::istringstream lng("a,b\n1,2,3\n");
    CHECK_THROWS_AS(csv::read_table(lng), csv::MalformedRow);
    std::istringstream late("a,b\n1,2\n3,4\n5\n");
    try {
        csv::read_table(late);
        FAIL("expected MalformedRow");
    } catch (const csv::MalformedRow& e) {
        CHECK(e.line_no == 4);
    }
}

TEST_CASE("alternate delimiter") {
    std::istringstream in("a\tb\n1\thas,comma\n");
    auto t = csv::read_table(in, {'\t'});
    CHECK(t.rows[0][1] == "has,comma");
}

TEST_CASE("encode_field quotes only when needed") {
    CHECK(csv::encode_field("plain", ',') == "plain");
    CHECK(csv::encode_field("1.25", ',') == "1.25");
    CHECK(csv::encode_field("a,b", ',') == "\"a,b\"");
    CHECK(csv::encode_field("a\"b", ',') == "\"a\"\"b\"");
    CHECK(csv::encode_field("a\nb", ',') == "\"a\nb\"");
    CHECK(csv::encode_field("a,b", '\t') == "a,b");  // comma is plain under tab dialect
}

TEST_CASE("write then read round-trips exactly") {
    csv::Table t;
    t.columns = {"id", "text", "x"};
    t.rows = {{"1", "plain", "0.5"},
              {"2", "comma, inside", "1"},
              {"3", "quote \" inside", "2"},
              {"4", "line\nbreak", "3"},
              {"5", "", "4"}};
    std::ostringstream out;
    csv::write_table(out, t);
    std::istringstream in(out.str());
    auto back = csv::read_table(in);
    CHECK(back.columns == t.columns);
    CHECK(back.rows == t.rows);

    // And the second serialization is byte-identical to the first.
    std::ostringstream out2;
    csv::write_table(out2, back);
    CHECK(out2.str() == out.str());
}

TEST_CASE("unquoted plain rows serialize without quotes") {
    csv::Table t;
    t.columns = {"a", "b"};
    t.rows = {{"1", "2"}};
    std::ostringstream out;
    csv::write_table(out, t);
    CHECK(out.str() == "a,b\n1,2\n");
}

TEST_CASE("empty data section is fine") {
    std::istringstream in("x,y\n");
    auto t = csv::read_table(in);
    CHECK(t.columns.size() == 2);
    CHECK(t.rows.empty());
}
