// Renders the order report in the browser.

function render(rows) {
  // TODO: paginate large reports
  var html = "";
  for (var i = 0; i < rows.length; i++) {
    html += "<tr><td>" + rows[i] + "</td></tr>";
  }
  return html;
}

function applyFilter(expr, rows) {
  console.log("filter", expr);
  return rows.filter(function (row) {
    return eval(expr);
  });
}
