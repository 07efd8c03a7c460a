(function () {
  var w = window;
  // A pop-up opened from another origin may have been handed data through
  // its name (window.open(url, document.cookie)). Drop it before any page
  // script can read it.
  try {
    if (w.opener && w.name) {
      var sameOrigin = false;
      try {
        sameOrigin = w.opener.location.origin === w.location.origin;
      } catch (e) {
        sameOrigin = false;
      }
      if (!sameOrigin) {
        w.name = "";
      }
    }
  } catch (e) {
    w.name = "";
  }
})();
var targetPage = "" + window.location.search;
if (targetPage != "" && targetPage != "undefined")
  targetPage = targetPage.substring(1);
if (targetPage.indexOf(":") != -1)
  targetPage = "undefined";
function loadFrames() {
  if (targetPage != "" && targetPage != "undefined" && top.classFrame)
    top.classFrame.location = top.targetPage;
}
